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

#ifndef QMIXLAB_QLEARN_MLP_H_
#define QMIXLAB_QLEARN_MLP_H_

#include <cstdint>
#include <span>
#include <vector>

#include "qmixlab/common/random.h"
#include "qmixlab/envs/environment.h"

namespace qmixlab::qlearn {

// Network input: either a dense vector or a binary observation given by its
// active indices. Sparse inputs skip the zero columns of the first layer.
class MlpInput {
 public:
  MlpInput(std::span<const double> dense)  // NOLINT
      : dense_(dense), size_(static_cast<int>(dense.size())), sparse_(false) {}
  MlpInput(const envs::Observation& obs)  // NOLINT
      : active_(obs.active), size_(obs.size), sparse_(true) {}

  int size() const { return size_; }
  bool sparse() const { return sparse_; }
  std::span<const double> dense() const { return dense_; }
  std::span<const int32_t> active() const { return active_; }

 private:
  std::span<const double> dense_;
  std::span<const int32_t> active_;
  int size_;
  bool sparse_;
};

// Fully connected network with ReLU hidden layers and a linear output.
//
// All parameters live in one flat vector so optimizers can treat them as a
// single span. Layer l occupies [weights (in x out, input-major), biases
// (out)]; input-major weights make the forward pass a sequence of axpy's
// over output rows, which also lets one-hot inputs touch only their rows.
class Mlp {
 public:
  Mlp() = default;
  // Zero-initialized network with the given layer sizes.
  explicit Mlp(std::vector<int> dims);

  // Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  static Mlp Initialized(std::vector<int> dims, Rng& rng);

  const std::vector<int>& dims() const { return dims_; }
  int num_layers() const { return static_cast<int>(dims_.size()) - 1; }
  int input_size() const { return dims_.front(); }
  int output_size() const { return dims_.back(); }
  std::size_t num_parameters() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> weights(int layer);
  std::span<const double> weights(int layer) const;
  std::span<double> biases(int layer);
  std::span<const double> biases(int layer) const;

  // Activations recorded by a forward pass, needed for backpropagation.
  struct Trace {
    std::vector<std::vector<double>> pre;   // per layer, before ReLU
    std::vector<std::vector<double>> post;  // per layer, after ReLU
  };

  std::vector<double> Forward(const MlpInput& input) const;
  void Forward(const MlpInput& input, Trace& trace) const;

  // Accumulates dL/dparameters into `grad` (same layout as parameters())
  // given dL/doutput for the traced input.
  void Backward(const MlpInput& input, const Trace& trace,
                std::span<const double> grad_output,
                std::span<double> grad) const;

  bool operator==(const Mlp& other) const = default;

 private:
  void CheckInput(const MlpInput& input) const;

  std::vector<int> dims_;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
  std::vector<double> params_;
};

// Gradient of L = mean_b (Q(o_b, a_b) - y_b)^2 over all parameters; the
// mean squared TD error restricted to the taken actions. Returns L.
double TdLossGradient(const Mlp& net, std::span<const MlpInput> inputs,
                      std::span<const int> actions,
                      std::span<const double> targets, std::span<double> grad);

// p_i proportional to exp(logits_i / temperature), max-subtracted. Throws
// InvalidArgument for temperature <= 0, an empty input or non-finite logits.
std::vector<double> Softmax(std::span<const double> logits,
                            double temperature = 1.0);

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_MLP_H_
