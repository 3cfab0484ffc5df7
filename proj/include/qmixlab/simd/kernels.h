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

#ifndef QMIXLAB_SIMD_KERNELS_H_
#define QMIXLAB_SIMD_KERNELS_H_

// Dense double-precision kernels behind the network, optimizer and mixing
// code. Every kernel has a scalar reference implementation; vector variants
// (AVX2+FMA on x86-64, NEON on AArch64) are selected once at startup from the
// CPU's capabilities and are equivalence-tested against the reference.
// Setting QMIXLAB_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace qmixlab::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

struct AdamCoeffs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x = max(x, 0)
  void (*relu)(double* x, std::size_t n);
  // grad[i] = pre[i] > 0 ? grad[i] : 0
  void (*relu_backward)(const double* pre, double* grad, std::size_t n);
  // One bias-corrected Adam update over n parameters.
  void (*adam)(double* w, const double* g, double* m, double* v,
               std::size_t n, const AdamCoeffs& c);
};

bool IsaAvailable(Isa isa);

// Kernel table for a specific ISA. Throws InvalidArgument if the ISA is not
// compiled in or not supported by this CPU.
const KernelTable& KernelsFor(Isa isa);

// The table selected for this process.
const KernelTable& Kernels();

inline Isa ActiveIsa() { return Kernels().isa; }

// Span conveniences over the active table.
double Dot(std::span<const double> x, std::span<const double> y);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
void Relu(std::span<double> x);
void ReluBackward(std::span<const double> pre, std::span<double> grad);

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonKernels;
#endif
}  // namespace detail

}  // namespace qmixlab::simd

#endif  // QMIXLAB_SIMD_KERNELS_H_
