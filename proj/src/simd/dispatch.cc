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

#include <cstdlib>
#include <string>

#include "qmixlab/common/error.h"
#include "qmixlab/simd/kernels.h"

namespace qmixlab::simd {

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& KernelsFor(Isa isa) {
  if (!IsaAvailable(isa)) {
    throw InvalidArgument("SIMD variant '" + std::string(IsaName(isa)) +
                          "' is not available on this CPU");
  }
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2:
      return detail::kAvx2Kernels;
#endif
#if defined(__aarch64__)
    case Isa::kNeon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

namespace {

const KernelTable& SelectKernels() {
  if (const char* env = std::getenv("QMIXLAB_SIMD")) {
    if (std::string(env) == "scalar") return detail::kScalarKernels;
  }
  if (IsaAvailable(Isa::kAvx2)) return KernelsFor(Isa::kAvx2);
  if (IsaAvailable(Isa::kNeon)) return KernelsFor(Isa::kNeon);
  return detail::kScalarKernels;
}

}  // namespace

const KernelTable& Kernels() {
  static const KernelTable& table = SelectKernels();
  return table;
}

double Dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("Dot: length mismatch");
  return Kernels().dot(x.data(), y.data(), x.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw InvalidArgument("Axpy: length mismatch");
  Kernels().axpy(alpha, x.data(), y.data(), x.size());
}

void Relu(std::span<double> x) { Kernels().relu(x.data(), x.size()); }

void ReluBackward(std::span<const double> pre, std::span<double> grad) {
  if (pre.size() != grad.size()) {
    throw InvalidArgument("ReluBackward: length mismatch");
  }
  Kernels().relu_backward(pre.data(), grad.data(), pre.size());
}

}  // namespace qmixlab::simd
