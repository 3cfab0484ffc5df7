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

#ifndef QMIXLAB_QLEARN_QFUNCTION_H_
#define QMIXLAB_QLEARN_QFUNCTION_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "qmixlab/common/random.h"
#include "qmixlab/envs/environment.h"
#include "qmixlab/qlearn/mlp.h"

namespace qmixlab::qlearn {

enum class QVariant { kTabular, kMlp };

// Action values against one opponent strategy: either a table keyed by the
// observation's discrete key, or an MLP over the dense encoding.
class QFunction {
 public:
  using Table = std::unordered_map<uint64_t, std::vector<double>>;

  QFunction() = default;

  static QFunction Tabular(int observation_size, int num_actions);
  static QFunction FromNetwork(Mlp net);
  // [observation_size, hidden..., num_actions] with the default initializer.
  static QFunction RandomMlp(int observation_size, int num_actions,
                             const std::vector<int>& hidden, Rng& rng);

  QVariant variant() const { return variant_; }
  int observation_size() const { return observation_size_; }
  int num_actions() const { return num_actions_; }

  // Q(obs, .). Unseen keys of a table map to the zero vector.
  std::vector<double> Values(const envs::Observation& obs) const;
  void Values(const envs::Observation& obs, std::span<double> out) const;

  // Tabular access.
  const Table& table() const { return table_; }
  Table& mutable_table() { return table_; }
  std::vector<double>& Row(uint64_t key);

  // Network access; throws StateError for tables.
  const Mlp& net() const;
  Mlp& net();

  bool operator==(const QFunction&) const = default;

 private:
  void CheckObservation(const envs::Observation& obs) const;

  QVariant variant_ = QVariant::kTabular;
  int observation_size_ = 0;
  int num_actions_ = 0;
  Table table_;
  Mlp net_;
};

// Argmax with ties to the lowest index. Throws InvalidArgument on an empty
// vector or NaN.
int GreedyAction(std::span<const double> q);

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_QFUNCTION_H_
