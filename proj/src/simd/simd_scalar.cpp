// Copyright 2026 The gaussot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar reference kernels.  These define the semantics the SIMD variants
// are equivalence-tested against.

#include <cmath>
#include <limits>

#include "gaussot/simd.hpp"

namespace gaussot::simd {
namespace {

double max_scalar(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t j = 1; j < n; ++j) m = v[j] > m ? v[j] : m;
  return m;
}

double logsumexp_scalar(const double* v, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const double m = max_scalar(v, n);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += std::exp(v[j] - m);
  return m + std::log(s);
}

double lse_affine2_scalar(const double* b, const double* u, const double* v,
                          double s, double t, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double arg = b[j] + s * u[j] + (v ? t * v[j] : 0.0);
    m = arg > m ? arg : m;
  }
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double arg = b[j] + s * u[j] + (v ? t * v[j] : 0.0);
    acc += std::exp(arg - m);
  }
  return m + std::log(acc);
}

double sumexp_affine2_scalar(const double* b, const double* u, const double* v,
                             double s, double t, double shift, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double arg = b[j] + s * u[j] + (v ? t * v[j] : 0.0);
    acc += std::exp(arg - shift);
  }
  return acc;
}

void exp_array_scalar(const double* v, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = std::exp(v[j]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += a[j] * b[j];
  return acc;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels table = {
      "scalar",         max_scalar, logsumexp_scalar, lse_affine2_scalar,
      sumexp_affine2_scalar, exp_array_scalar, dot_scalar,
  };
  return table;
}

}  // namespace gaussot::simd
