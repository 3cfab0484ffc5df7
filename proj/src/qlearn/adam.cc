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

#include "qmixlab/qlearn/adam.h"

#include <cmath>

#include "qmixlab/common/error.h"
#include "qmixlab/simd/kernels.h"

namespace qmixlab::qlearn {

void AdamStep(std::span<double> weights, std::span<const double> grads,
              AdamMoments& moments, const AdamConfig& config, int64_t t) {
  const std::size_t n = weights.size();
  if (grads.size() != n || moments.m.size() != n || moments.v.size() != n) {
    throw InvalidArgument("adam: weights, gradients and moments differ in size");
  }
  if (t < 1) throw InvalidArgument("adam: step index must be >= 1");
  const double td = static_cast<double>(t);
  const simd::AdamCoeffs coeffs{config.learning_rate,
                                config.beta1,
                                config.beta2,
                                config.epsilon,
                                1.0 - std::pow(config.beta1, td),
                                1.0 - std::pow(config.beta2, td)};
  simd::Kernels().adam(weights.data(), grads.data(), moments.m.data(),
                       moments.v.data(), n, coeffs);
}

}  // namespace qmixlab::qlearn
