// Copyright 2026 The QMixLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Built with -mavx2 -mfma; only reached when the CPU reports both.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "qmixlab/simd/kernels.h"

namespace qmixlab::simd::detail {
namespace {

inline double HorizontalSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double DotAvx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void AxpyAvx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), yv));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ReluAvx2(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // max_pd returns the second operand for NaN input, matching the scalar path.
    _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void ReluBackwardAvx2(const double* pre, double* grad, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(grad + i, _mm256_and_pd(mask, _mm256_loadu_pd(grad + i)));
  }
  for (; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

void AdamAvx2(double* w, const double* g, double* m, double* v, std::size_t n,
              const AdamCoeffs& c) {
  const __m256d b1 = _mm256_set1_pd(c.beta1);
  const __m256d one_b1 = _mm256_set1_pd(1.0 - c.beta1);
  const __m256d b2 = _mm256_set1_pd(c.beta2);
  const __m256d one_b2 = _mm256_set1_pd(1.0 - c.beta2);
  const __m256d inv_bc1 = _mm256_set1_pd(1.0 / c.bias_correction1);
  const __m256d inv_bc2 = _mm256_set1_pd(1.0 / c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.lr);
  const __m256d eps = _mm256_set1_pd(c.eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d gv = _mm256_loadu_pd(g + i);
    __m256d mv = _mm256_fmadd_pd(b1, _mm256_loadu_pd(m + i),
                                 _mm256_mul_pd(one_b1, gv));
    __m256d vv = _mm256_fmadd_pd(b2, _mm256_loadu_pd(v + i),
                                 _mm256_mul_pd(one_b2, _mm256_mul_pd(gv, gv)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    __m256d denom =
        _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, inv_bc2)), eps);
    __m256d step =
        _mm256_div_pd(_mm256_mul_pd(lr, _mm256_mul_pd(mv, inv_bc1)), denom);
    _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), step));
  }
  for (; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    w[i] -= c.lr * (m[i] / c.bias_correction1) /
            (std::sqrt(v[i] / c.bias_correction2) + c.eps);
  }
}

}  // namespace

const KernelTable kAvx2Kernels{Isa::kAvx2, DotAvx2,          AxpyAvx2,
                               ReluAvx2,   ReluBackwardAvx2, AdamAvx2};

}  // namespace qmixlab::simd::detail

#endif
