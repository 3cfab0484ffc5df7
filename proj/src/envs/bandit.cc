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

#include "qmixlab/envs/bandit.h"

#include "qmixlab/common/error.h"

namespace qmixlab::envs {

BanditGame::BanditGame(std::vector<std::vector<double>> payoffs)
    : payoffs_(std::move(payoffs)) {
  if (payoffs_.empty() || payoffs_[0].empty()) {
    throw InvalidArgument("bandit: empty payoff table");
  }
  num_arms_ = static_cast<int>(payoffs_[0].size());
  for (const auto& row : payoffs_) {
    if (static_cast<int>(row.size()) != num_arms_) {
      throw InvalidArgument("bandit: ragged payoff table");
    }
  }
}

void BanditGame::Reset(uint64_t /*seed*/) { terminal_ = false; }

Observation BanditGame::Observe(int /*player*/) const {
  return StateObservation(0, 0);
}

Observation BanditGame::StateObservation(int /*state*/, int /*player*/) const {
  Observation obs;
  obs.size = 1;
  obs.active = {0};
  obs.key = 0;
  return obs;
}

double BanditGame::payoff(int opponent_action, int arm) const {
  if (opponent_action < 0 || opponent_action >= opponent_num_actions() ||
      arm < 0 || arm >= num_arms_) {
    throw InvalidArgument("bandit: action out of range");
  }
  return payoffs_[static_cast<std::size_t>(opponent_action)]
                 [static_cast<std::size_t>(arm)];
}

StepResult BanditGame::Step(int learner_action, int opponent_action,
                            Rng& /*rng*/) {
  if (terminal_) throw StateError("episode finished");
  const double r = payoff(opponent_action, learner_action);
  terminal_ = true;
  return StepResult{{r, -r}, true};
}

std::unique_ptr<Environment> BanditGame::Clone() const {
  return std::make_unique<BanditGame>(*this);
}

void BanditGame::Transitions(int /*state*/, int learner_action,
                             int opponent_action,
                             std::vector<Outcome>& out) const {
  out.push_back(
      Outcome{kTerminalState, payoff(opponent_action, learner_action), 1.0});
}

}  // namespace qmixlab::envs
