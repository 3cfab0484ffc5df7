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

#ifndef QMIXLAB_QLEARN_AGENT_H_
#define QMIXLAB_QLEARN_AGENT_H_

#include <memory>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/envs/policy.h"
#include "qmixlab/qlearn/qfunction.h"

namespace qmixlab::qlearn {

// Facts about the running episode available to a learner-side decision
// rule. Only test oracles read `opponent`.
struct EpisodeContext {
  int opponent = -1;
};

// Deterministic learner-side policy; evaluation is always greedy.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual int Act(const envs::Observation& obs,
                  const EpisodeContext& context) const = 0;
};

class GreedyQAgent final : public Agent {
 public:
  explicit GreedyQAgent(std::shared_ptr<const QFunction> q) : q_(std::move(q)) {}
  int Act(const envs::Observation& obs, const EpisodeContext&) const override;
  const QFunction& q() const { return *q_; }

 private:
  std::shared_ptr<const QFunction> q_;
};

// Lets an agent occupy the opponent seat.
class AgentPolicy final : public envs::Policy {
 public:
  AgentPolicy(std::shared_ptr<const Agent> agent, int num_actions)
      : agent_(std::move(agent)), num_actions_(num_actions) {}
  std::vector<double> ActionProbabilities(
      const envs::Observation& obs) const override;
  // Deterministic; consumes one draw to keep streams aligned with Policy.
  int Act(const envs::Observation& obs, Rng& rng) const override;

 private:
  std::shared_ptr<const Agent> agent_;
  int num_actions_;
};

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_AGENT_H_
