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

#include "qmixlab/qlearn/qfunction.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmixlab/common/error.h"

namespace qmixlab::qlearn {

QFunction QFunction::Tabular(int observation_size, int num_actions) {
  if (observation_size <= 0 || num_actions <= 0) {
    throw InvalidArgument("q-function: sizes must be positive");
  }
  QFunction q;
  q.variant_ = QVariant::kTabular;
  q.observation_size_ = observation_size;
  q.num_actions_ = num_actions;
  return q;
}

QFunction QFunction::FromNetwork(Mlp net) {
  QFunction q;
  q.variant_ = QVariant::kMlp;
  q.observation_size_ = net.input_size();
  q.num_actions_ = net.output_size();
  q.net_ = std::move(net);
  return q;
}

QFunction QFunction::RandomMlp(int observation_size, int num_actions,
                               const std::vector<int>& hidden, Rng& rng) {
  std::vector<int> dims{observation_size};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(num_actions);
  return FromNetwork(Mlp::Initialized(std::move(dims), rng));
}

void QFunction::CheckObservation(const envs::Observation& obs) const {
  if (obs.size != observation_size_) {
    throw InvalidArgument("q-function: observation has " +
                          std::to_string(obs.size) + " features, expected " +
                          std::to_string(observation_size_));
  }
}

std::vector<double> QFunction::Values(const envs::Observation& obs) const {
  std::vector<double> out(static_cast<std::size_t>(num_actions_));
  Values(obs, out);
  return out;
}

void QFunction::Values(const envs::Observation& obs,
                       std::span<double> out) const {
  CheckObservation(obs);
  if (static_cast<int>(out.size()) != num_actions_) {
    throw InvalidArgument("q-function: output buffer has wrong size");
  }
  if (variant_ == QVariant::kTabular) {
    auto it = table_.find(obs.key);
    if (it == table_.end()) {
      std::fill(out.begin(), out.end(), 0.0);
    } else {
      std::copy(it->second.begin(), it->second.end(), out.begin());
    }
    return;
  }
  const std::vector<double> q = net_.Forward(obs);
  std::copy(q.begin(), q.end(), out.begin());
}

std::vector<double>& QFunction::Row(uint64_t key) {
  if (variant_ != QVariant::kTabular) {
    throw StateError("q-function: not tabular");
  }
  auto [it, inserted] = table_.try_emplace(key);
  if (inserted) it->second.assign(static_cast<std::size_t>(num_actions_), 0.0);
  return it->second;
}

const Mlp& QFunction::net() const {
  if (variant_ != QVariant::kMlp) throw StateError("q-function: not an mlp");
  return net_;
}

Mlp& QFunction::net() {
  if (variant_ != QVariant::kMlp) throw StateError("q-function: not an mlp");
  return net_;
}

int GreedyAction(std::span<const double> q) {
  if (q.empty()) throw InvalidArgument("greedy action: empty value vector");
  int best = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (std::isnan(q[i])) throw InvalidArgument("greedy action: NaN value");
    if (q[i] > q[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace qmixlab::qlearn
