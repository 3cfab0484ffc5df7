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

#include "qmixlab/qlearn/mlp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmixlab/common/error.h"
#include "qmixlab/simd/kernels.h"

namespace qmixlab::qlearn {

Mlp::Mlp(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw InvalidArgument("mlp: need at least two layers");
  for (int d : dims_) {
    if (d <= 0) throw InvalidArgument("mlp: layer sizes must be positive");
  }
  std::size_t offset = 0;
  for (int l = 0; l < num_layers(); ++l) {
    weight_offset_.push_back(offset);
    offset += static_cast<std::size_t>(dims_[l]) * dims_[l + 1];
    bias_offset_.push_back(offset);
    offset += static_cast<std::size_t>(dims_[l + 1]);
  }
  params_.assign(offset, 0.0);
}

Mlp Mlp::Initialized(std::vector<int> dims, Rng& rng) {
  Mlp net(std::move(dims));
  for (int l = 0; l < net.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[l]));
    for (double& w : net.weights(l)) w = bound * (2.0 * Uniform01(rng) - 1.0);
  }
  return net;
}

std::span<double> Mlp::weights(int layer) {
  return std::span<double>(params_).subspan(
      weight_offset_[layer],
      static_cast<std::size_t>(dims_[layer]) * dims_[layer + 1]);
}

std::span<const double> Mlp::weights(int layer) const {
  return std::span<const double>(params_).subspan(
      weight_offset_[layer],
      static_cast<std::size_t>(dims_[layer]) * dims_[layer + 1]);
}

std::span<double> Mlp::biases(int layer) {
  return std::span<double>(params_).subspan(bias_offset_[layer],
                                            dims_[layer + 1]);
}

std::span<const double> Mlp::biases(int layer) const {
  return std::span<const double>(params_).subspan(bias_offset_[layer],
                                                  dims_[layer + 1]);
}

void Mlp::CheckInput(const MlpInput& input) const {
  if (dims_.empty()) throw StateError("mlp: network has no layers");
  if (input.size() != input_size()) {
    throw InvalidArgument("mlp: input has " + std::to_string(input.size()) +
                          " features, network expects " +
                          std::to_string(input_size()));
  }
}

std::vector<double> Mlp::Forward(const MlpInput& input) const {
  Trace trace;
  Forward(input, trace);
  return std::move(trace.post.back());
}

void Mlp::Forward(const MlpInput& input, Trace& trace) const {
  CheckInput(input);
  const simd::KernelTable& k = simd::Kernels();
  const int layers = num_layers();
  trace.pre.resize(layers);
  trace.post.resize(layers);
  for (int l = 0; l < layers; ++l) {
    const std::size_t out = static_cast<std::size_t>(dims_[l + 1]);
    const double* w = params_.data() + weight_offset_[l];
    std::vector<double>& y = trace.pre[l];
    const std::span<const double> b = biases(l);
    y.assign(b.begin(), b.end());
    if (l == 0 && input.sparse()) {
      for (int32_t i : input.active()) {
        k.axpy(1.0, w + static_cast<std::size_t>(i) * out, y.data(), out);
      }
    } else {
      const std::span<const double> x =
          l == 0 ? input.dense() : std::span<const double>(trace.post[l - 1]);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) k.axpy(x[i], w + i * out, y.data(), out);
      }
    }
    std::vector<double>& z = trace.post[l];
    z = y;
    if (l + 1 < layers) k.relu(z.data(), out);
  }
}

void Mlp::Backward(const MlpInput& input, const Trace& trace,
                   std::span<const double> grad_output,
                   std::span<double> grad) const {
  CheckInput(input);
  if (grad.size() != params_.size()) {
    throw InvalidArgument("mlp: gradient buffer has wrong size");
  }
  if (static_cast<int>(grad_output.size()) != output_size()) {
    throw InvalidArgument("mlp: output gradient has wrong size");
  }
  const simd::KernelTable& k = simd::Kernels();
  std::vector<double> dy(grad_output.begin(), grad_output.end());
  std::vector<double> dx;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const std::size_t out = static_cast<std::size_t>(dims_[l + 1]);
    const double* w = params_.data() + weight_offset_[l];
    double* dw = grad.data() + weight_offset_[l];
    double* db = grad.data() + bias_offset_[l];
    k.axpy(1.0, dy.data(), db, out);
    if (l == 0) {
      if (input.sparse()) {
        for (int32_t i : input.active()) {
          k.axpy(1.0, dy.data(), dw + static_cast<std::size_t>(i) * out, out);
        }
      } else {
        const std::span<const double> x = input.dense();
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] != 0.0) k.axpy(x[i], dy.data(), dw + i * out, out);
        }
      }
      break;
    }
    const std::vector<double>& x = trace.post[l - 1];
    dx.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) k.axpy(x[i], dy.data(), dw + i * out, out);
      dx[i] = k.dot(w + i * out, dy.data(), out);
    }
    // Through the ReLU of the previous layer.
    const std::vector<double>& pre = trace.pre[l - 1];
    k.relu_backward(pre.data(), dx.data(), pre.size());
    dy.swap(dx);
  }
}

double TdLossGradient(const Mlp& net, std::span<const MlpInput> inputs,
                      std::span<const int> actions,
                      std::span<const double> targets, std::span<double> grad) {
  const std::size_t n = inputs.size();
  if (actions.size() != n || targets.size() != n) {
    throw InvalidArgument("td loss: batch fields have different lengths");
  }
  if (n == 0) throw InvalidArgument("td loss: empty batch");
  std::fill(grad.begin(), grad.end(), 0.0);
  Mlp::Trace trace;
  std::vector<double> dout(static_cast<std::size_t>(net.output_size()));
  double loss = 0.0;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t b = 0; b < n; ++b) {
    const int a = actions[b];
    if (a < 0 || a >= net.output_size()) {
      throw InvalidArgument("td loss: action out of range");
    }
    net.Forward(inputs[b], trace);
    const double err = trace.post.back()[static_cast<std::size_t>(a)] -
                       targets[b];
    loss += err * err * scale;
    std::fill(dout.begin(), dout.end(), 0.0);
    dout[static_cast<std::size_t>(a)] = 2.0 * err * scale;
    net.Backward(inputs[b], trace, dout, grad);
  }
  return loss;
}

std::vector<double> Softmax(std::span<const double> logits,
                            double temperature) {
  if (!(temperature > 0.0)) {
    throw InvalidArgument("softmax: temperature must be positive");
  }
  if (logits.empty()) throw InvalidArgument("softmax: empty input");
  double top = logits[0];
  for (double x : logits) {
    if (!std::isfinite(x)) throw InvalidArgument("softmax: non-finite logit");
    top = std::max(top, x);
  }
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp((logits[i] - top) / temperature);
    z += p[i];
  }
  for (double& x : p) x /= z;
  return p;
}

}  // namespace qmixlab::qlearn
