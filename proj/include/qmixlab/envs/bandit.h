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

#ifndef QMIXLAB_ENVS_BANDIT_H_
#define QMIXLAB_ENVS_BANDIT_H_

#include <memory>
#include <string>
#include <vector>

#include "qmixlab/envs/environment.h"

namespace qmixlab::envs {

// One-shot, single-state game: the learner pulls an arm, the opponent's
// action selects the payoff row. payoffs[opponent_action][arm] is the
// learner's deterministic reward; the opponent receives its negation.
class BanditGame final : public Environment, public EnumerableGame {
 public:
  explicit BanditGame(std::vector<std::vector<double>> payoffs);

  std::string name() const override { return "bandit"; }
  int num_actions() const override { return num_arms_; }
  int opponent_num_actions() const override {
    return static_cast<int>(payoffs_.size());
  }
  int observation_size() const override { return 1; }
  void Reset(uint64_t seed) override;
  Observation Observe(int player) const override;
  StepResult Step(int learner_action, int opponent_action, Rng& rng) override;
  bool terminal() const override { return terminal_; }
  std::unique_ptr<Environment> Clone() const override;
  const EnumerableGame* enumerable() const override { return this; }

  int NumStates() const override { return 1; }
  Observation StateObservation(int state, int player) const override;
  int StateIndexOfKey(uint64_t key) const override { return key == 0 ? 0 : -1; }
  std::vector<std::pair<int, double>> InitialDistribution() const override {
    return {{0, 1.0}};
  }
  void Transitions(int state, int learner_action, int opponent_action,
                   std::vector<Outcome>& out) const override;

  double payoff(int opponent_action, int arm) const;

 private:
  std::vector<std::vector<double>> payoffs_;
  int num_arms_ = 0;
  bool terminal_ = false;
};

}  // namespace qmixlab::envs

#endif  // QMIXLAB_ENVS_BANDIT_H_
