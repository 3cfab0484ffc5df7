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

#ifndef QMIXLAB_ENVS_ENVIRONMENT_H_
#define QMIXLAB_ENVS_ENVIRONMENT_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qmixlab/common/random.h"

namespace qmixlab::envs {

// A binary (one-hot per cell) observation, stored by the indices of its
// one-valued entries. `key` is a discrete id of the content, usable as a
// tabular index.
struct Observation {
  int size = 0;
  std::vector<int32_t> active;  // ascending
  uint64_t key = 0;

  std::vector<double> Dense() const;
  bool operator==(const Observation& other) const = default;
};

struct StepResult {
  std::array<double, 2> rewards{0.0, 0.0};
  bool terminal = false;
};

// One outcome of an enumerable transition: next state index (kTerminalState
// for the absorbing terminal), learner reward, probability.
struct Outcome {
  int next;
  double reward;
  double prob;
};

inline constexpr int kTerminalState = -1;

// Exact dynamics for environments with an enumerable state space. States are
// seen from the learner's seat (player 0); actions are in each seat's local
// frame, as for Environment::Step.
class EnumerableGame {
 public:
  virtual ~EnumerableGame() = default;
  virtual int NumStates() const = 0;
  virtual Observation StateObservation(int state, int player) const = 0;
  // Index of the state whose learner observation has this key, or -1.
  virtual int StateIndexOfKey(uint64_t key) const = 0;
  virtual std::vector<std::pair<int, double>> InitialDistribution() const = 0;
  // Appends every outcome of the joint action with its probability.
  virtual void Transitions(int state, int learner_action, int opponent_action,
                           std::vector<Outcome>& out) const = 0;
};

// Two-player environment driven from the learner's seat (player 0). The
// opponent occupies seat 1; both seats act in their own local frames so a
// policy trained in one seat can play the other.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::string name() const = 0;
  virtual int num_actions() const = 0;
  virtual int opponent_num_actions() const { return num_actions(); }
  virtual int observation_size() const = 0;
  virtual void Reset(uint64_t seed) = 0;
  virtual Observation Observe(int player) const = 0;
  virtual StepResult Step(int learner_action, int opponent_action,
                          Rng& rng) = 0;
  virtual bool terminal() const = 0;
  virtual std::unique_ptr<Environment> Clone() const = 0;
  // Non-null when exact transition kernels can be built.
  virtual const EnumerableGame* enumerable() const { return nullptr; }
};

// Hash of the active index list, used as the discrete key when the content
// does not admit a compact bijective index.
uint64_t HashActive(const std::vector<int32_t>& active);

}  // namespace qmixlab::envs

#endif  // QMIXLAB_ENVS_ENVIRONMENT_H_
