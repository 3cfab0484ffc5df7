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

#ifndef QMIXLAB_QLEARN_ADAM_H_
#define QMIXLAB_QLEARN_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace qmixlab::qlearn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;

  AdamMoments() = default;
  explicit AdamMoments(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
  bool operator==(const AdamMoments&) const = default;
};

// One bias-corrected Adam update at step t >= 1. Updates weights and
// moments in place; deterministic for identical inputs.
void AdamStep(std::span<double> weights, std::span<const double> grads,
              AdamMoments& moments, const AdamConfig& config, int64_t t);

// Adam with its own step counter.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t num_parameters, AdamConfig config)
      : config_(config), moments_(num_parameters) {}

  void Step(std::span<double> weights, std::span<const double> grads) {
    AdamStep(weights, grads, moments_, config_, ++t_);
  }

  int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  AdamMoments moments_;
  int64_t t_ = 0;
};

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_ADAM_H_
