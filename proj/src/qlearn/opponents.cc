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

#include "qmixlab/qlearn/opponents.h"

#include "qmixlab/common/error.h"
#include "qmixlab/qlearn/agent.h"
#include "qmixlab/qlearn/model_io.h"

namespace qmixlab::qlearn {

std::shared_ptr<const envs::Policy> MakeOpponent(const envs::Environment& env,
                                                 const std::string& id) {
  constexpr std::string_view kPrefix = "qlearner:";
  if (id.rfind(kPrefix, 0) != 0) return envs::MakeScriptedOpponent(env, id);
  const std::string path = id.substr(kPrefix.size());
  auto q = std::make_shared<const QFunction>(
      QFunctionFromDocument(LoadModel(path)));
  if (q->observation_size() != env.observation_size() ||
      q->num_actions() != env.opponent_num_actions()) {
    throw InvalidArgument(
        "opponent '" + id + "' has observation size " +
        std::to_string(q->observation_size()) + " and " +
        std::to_string(q->num_actions()) + " actions; environment needs " +
        std::to_string(env.observation_size()) + " and " +
        std::to_string(env.opponent_num_actions()));
  }
  return std::make_shared<AgentPolicy>(std::make_shared<GreedyQAgent>(q),
                                       q->num_actions());
}

envs::OpponentPool MakeOpponentPool(const envs::Environment& env,
                                    const std::vector<std::string>& ids) {
  if (ids.empty()) throw InvalidArgument("opponent pool: no opponents");
  envs::OpponentPool pool;
  for (const std::string& id : ids) {
    pool.ids.push_back(id);
    pool.policies.push_back(MakeOpponent(env, id));
  }
  return pool;
}

}  // namespace qmixlab::qlearn
