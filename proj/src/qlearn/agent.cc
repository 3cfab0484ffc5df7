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

#include "qmixlab/qlearn/agent.h"

namespace qmixlab::qlearn {

int GreedyQAgent::Act(const envs::Observation& obs,
                      const EpisodeContext&) const {
  return GreedyAction(q_->Values(obs));
}

std::vector<double> AgentPolicy::ActionProbabilities(
    const envs::Observation& obs) const {
  std::vector<double> p(static_cast<std::size_t>(num_actions_), 0.0);
  p[static_cast<std::size_t>(agent_->Act(obs, EpisodeContext{}))] = 1.0;
  return p;
}

int AgentPolicy::Act(const envs::Observation& obs, Rng& rng) const {
  rng();
  return agent_->Act(obs, EpisodeContext{});
}

}  // namespace qmixlab::qlearn
