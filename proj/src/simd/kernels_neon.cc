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

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "qmixlab/simd/kernels.h"

namespace qmixlab::simd::detail {
namespace {

double DotNeon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void AxpyNeon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void ReluNeon(double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    uint64x2_t keep = vcgtq_f64(v, zero);
    vst1q_f64(x + i, vreinterpretq_f64_u64(
                         vandq_u64(keep, vreinterpretq_u64_f64(v))));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void ReluBackwardNeon(const double* pre, double* grad, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t keep = vcgtq_f64(vld1q_f64(pre + i), zero);
    vst1q_f64(grad + i,
              vreinterpretq_f64_u64(vandq_u64(
                  keep, vreinterpretq_u64_f64(vld1q_f64(grad + i)))));
  }
  for (; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

void AdamNeon(double* w, const double* g, double* m, double* v, std::size_t n,
              const AdamCoeffs& c) {
  const float64x2_t b1 = vdupq_n_f64(c.beta1);
  const float64x2_t one_b1 = vdupq_n_f64(1.0 - c.beta1);
  const float64x2_t b2 = vdupq_n_f64(c.beta2);
  const float64x2_t one_b2 = vdupq_n_f64(1.0 - c.beta2);
  const float64x2_t inv_bc1 = vdupq_n_f64(1.0 / c.bias_correction1);
  const float64x2_t inv_bc2 = vdupq_n_f64(1.0 / c.bias_correction2);
  const float64x2_t lr = vdupq_n_f64(c.lr);
  const float64x2_t eps = vdupq_n_f64(c.eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t gv = vld1q_f64(g + i);
    float64x2_t mv = vfmaq_f64(vmulq_f64(one_b1, gv), b1, vld1q_f64(m + i));
    float64x2_t vv = vfmaq_f64(vmulq_f64(one_b2, vmulq_f64(gv, gv)), b2,
                               vld1q_f64(v + i));
    vst1q_f64(m + i, mv);
    vst1q_f64(v + i, vv);
    float64x2_t denom = vaddq_f64(vsqrtq_f64(vmulq_f64(vv, inv_bc2)), eps);
    float64x2_t step = vdivq_f64(vmulq_f64(lr, vmulq_f64(mv, inv_bc1)), denom);
    vst1q_f64(w + i, vsubq_f64(vld1q_f64(w + i), step));
  }
  for (; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    w[i] -= c.lr * (m[i] / c.bias_correction1) /
            (std::sqrt(v[i] / c.bias_correction2) + c.eps);
  }
}

}  // namespace

const KernelTable kNeonKernels{Isa::kNeon, DotNeon,          AxpyNeon,
                               ReluNeon,   ReluBackwardNeon, AdamNeon};

}  // namespace qmixlab::simd::detail

#endif
