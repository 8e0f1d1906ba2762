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

// AVX2+FMA kernel variants.  Compiled with per-function target attributes so
// the translation unit builds at the baseline ISA; the dispatcher only hands
// these out after __builtin_cpu_supports("avx2") succeeds.

#include "gaussot/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

#define GAUSSOT_AVX2 __attribute__((target("avx2,fma")))

namespace gaussot::simd {
namespace {

// exp(x) on 4 lanes: range reduction x = n*ln2 + r with |r| <= ln2/2,
// degree-13 Taylor polynomial on r, exact 2^n scaling through the exponent
// bits.  Inputs below the underflow edge flush to 0, above the overflow edge
// saturate to +inf; accuracy elsewhere is ~1 ulp, matched against std::exp
// in the equivalence tests.
GAUSSOT_AVX2 inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d underflow = _mm256_set1_pd(-745.2);
  const __m256d overflow = _mm256_set1_pd(709.78);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^n applied as 2^n1 * 2^n2 with n split roughly in half, so |n| up to
  // 1075 scales without the single-step exponent field overflowing; the
  // two-step product also reaches subnormal results gradually.
  const __m256d n1 = _mm256_round_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)),
                                     _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  const __m256d n2 = _mm256_sub_pd(n, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i e1 = _mm256_slli_epi64(
      _mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n1)), bias), 52);
  const __m256i e2 = _mm256_slli_epi64(
      _mm256_add_epi64(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n2)), bias), 52);
  __m256d y = _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(e1)),
                            _mm256_castsi256_pd(e2));

  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), _mm256_cmp_pd(x, underflow, _CMP_LT_OQ));
  y = _mm256_blendv_pd(y, _mm256_set1_pd(std::numeric_limits<double>::infinity()),
                       _mm256_cmp_pd(x, overflow, _CMP_GT_OQ));
  return y;
}

GAUSSOT_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

GAUSSOT_AVX2 inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

GAUSSOT_AVX2 inline __m256d load_arg(const double* b, const double* u, const double* v,
                                     __m256d s, __m256d t, std::size_t j) {
  __m256d arg = _mm256_fmadd_pd(s, _mm256_loadu_pd(u + j), _mm256_loadu_pd(b + j));
  if (v) arg = _mm256_fmadd_pd(t, _mm256_loadu_pd(v + j), arg);
  return arg;
}

GAUSSOT_AVX2 double max_avx2(const double* v, std::size_t n) {
  std::size_t j = 0;
  double m = v[0];
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(v);
    for (j = 4; j + 4 <= n; j += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(v + j));
    m = hmax(vm);
  }
  for (; j < n; ++j) m = v[j] > m ? v[j] : m;
  return m;
}

GAUSSOT_AVX2 double logsumexp_avx2(const double* v, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const double m = max_avx2(v, n);
  if (!std::isfinite(m)) return m;
  const __m256d vm = _mm256_set1_pd(m);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    acc = _mm256_add_pd(acc, exp4(_mm256_sub_pd(_mm256_loadu_pd(v + j), vm)));
  double s = hsum(acc);
  for (; j < n; ++j) s += std::exp(v[j] - m);
  return m + std::log(s);
}

GAUSSOT_AVX2 double lse_affine2_avx2(const double* b, const double* u, const double* v,
                                     double s, double t, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d vt = _mm256_set1_pd(t);
  double m = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (n >= 4) {
    __m256d vm = _mm256_set1_pd(m);
    for (; j + 4 <= n; j += 4) vm = _mm256_max_pd(vm, load_arg(b, u, v, vs, vt, j));
    m = hmax(vm);
  }
  for (; j < n; ++j) {
    const double arg = b[j] + s * u[j] + (v ? t * v[j] : 0.0);
    m = arg > m ? arg : m;
  }
  if (!std::isfinite(m)) return m;
  const __m256d vshift = _mm256_set1_pd(m);
  __m256d acc = _mm256_setzero_pd();
  j = 0;
  for (; j + 4 <= n; j += 4)
    acc = _mm256_add_pd(acc, exp4(_mm256_sub_pd(load_arg(b, u, v, vs, vt, j), vshift)));
  double total = hsum(acc);
  for (; j < n; ++j) {
    const double arg = b[j] + s * u[j] + (v ? t * v[j] : 0.0);
    total += std::exp(arg - m);
  }
  return m + std::log(total);
}

GAUSSOT_AVX2 double sumexp_affine2_avx2(const double* b, const double* u, const double* v,
                                        double s, double t, double shift, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d vshift = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    acc = _mm256_add_pd(acc, exp4(_mm256_sub_pd(load_arg(b, u, v, vs, vt, j), vshift)));
  double total = hsum(acc);
  for (; j < n; ++j) {
    const double arg = b[j] + s * u[j] + (v ? t * v[j] : 0.0);
    total += std::exp(arg - shift);
  }
  return total;
}

GAUSSOT_AVX2 void exp_array_avx2(const double* v, double* out, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(out + j, exp4(_mm256_loadu_pd(v + j)));
  for (; j < n; ++j) out[j] = std::exp(v[j]);
}

GAUSSOT_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc);
  double s = hsum(acc);
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

bool cpu_has_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Kernels* avx2_kernels() {
  if (!cpu_has_avx2()) return nullptr;
  static const Kernels table = {
      "avx2",       max_avx2, logsumexp_avx2, lse_affine2_avx2,
      sumexp_affine2_avx2, exp_array_avx2, dot_avx2,
  };
  return &table;
}

}  // namespace gaussot::simd

#else  // non-x86 builds fall back to the scalar table.

namespace gaussot::simd {
bool cpu_has_avx2() { return false; }
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace gaussot::simd

#endif
