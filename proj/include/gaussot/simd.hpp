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

#pragma once

#include <cstddef>

namespace gaussot::simd {

// Flat-array kernels behind the hot loops (IPFP potential updates, kernel
// matrix assembly, Monte Carlo accumulation).  Scalar reference
// implementations are always available; an AVX2+FMA variant is selected at
// runtime when the CPU supports it.  The environment variable GS_SIMD
// ("auto" | "scalar" | "avx2") overrides the selection.
//
// Affine argument convention: arg_j = b[j] + s*u[j] + t*v[j], with v == nullptr
// meaning t*v[j] == 0.  This expresses both 1-D and 2-D squared-distance rows
// after the caller folds the quadratic terms into b and the constant.
struct Kernels {
  const char* name;

  // max_j v[j]; n >= 1.
  double (*max)(const double* v, std::size_t n);
  // log sum_j exp(v[j]); returns -inf for n == 0.
  double (*logsumexp)(const double* v, std::size_t n);
  // log sum_j exp(b[j] + s*u[j] + t*v[j]).
  double (*lse_affine2)(const double* b, const double* u, const double* v,
                        double s, double t, std::size_t n);
  // sum_j exp(b[j] + s*u[j] + t*v[j] - shift).
  double (*sumexp_affine2)(const double* b, const double* u, const double* v,
                           double s, double t, double shift, std::size_t n);
  // out[j] = exp(v[j]).
  void (*exp_array)(const double* v, double* out, std::size_t n);
  // sum_j a[j]*b[j].
  double (*dot)(const double* a, const double* b, std::size_t n);
};

/// Kernel table selected for this process (dispatch happens once).
const Kernels& kernels();

/// Scalar reference table, always available.
const Kernels& scalar_kernels();

/// AVX2 table, or nullptr when unsupported on this CPU/build.
const Kernels* avx2_kernels();

bool cpu_has_avx2();

}  // namespace gaussot::simd
