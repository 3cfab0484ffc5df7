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

#ifndef QMIXLAB_ENVS_POLICY_H_
#define QMIXLAB_ENVS_POLICY_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmixlab/common/random.h"
#include "qmixlab/envs/environment.h"

namespace qmixlab::envs {

// A (possibly stochastic) policy over local-frame observations.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<double> ActionProbabilities(
      const Observation& obs) const = 0;
  // Samples from ActionProbabilities with exactly one draw from rng.
  virtual int Act(const Observation& obs, Rng& rng) const;
};

// Inverse-CDF categorical draw; consumes one uniform.
int SampleCategorical(std::span<const double> probs, Rng& rng);

class UniformRandomPolicy final : public Policy {
 public:
  explicit UniformRandomPolicy(int num_actions);
  std::vector<double> ActionProbabilities(const Observation&) const override;

 private:
  int num_actions_;
};

// Always plays one action.
class FixedActionPolicy final : public Policy {
 public:
  FixedActionPolicy(int num_actions, int action);
  std::vector<double> ActionProbabilities(const Observation&) const override;

 private:
  int num_actions_;
  int action_;
};

// Opponent policies aligned with their ids; index k is the opponent label
// stored with every transition.
struct OpponentPool {
  std::vector<std::string> ids;
  std::vector<std::shared_ptr<const Policy>> policies;

  int size() const { return static_cast<int>(ids.size()); }
};

// Ids of the built-in scripted opponents for an environment, in registry
// order.
std::vector<std::string> ScriptedOpponentIds(const std::string& env_name);

// Builds a scripted opponent. Soccer: random, chaser, camper, noisy_chaser,
// interceptor. Commons: random, harvester, tagger. Bandit: random,
// fixed:<action>. Throws InvalidArgument for unknown ids.
std::shared_ptr<const Policy> MakeScriptedOpponent(const Environment& env,
                                                   const std::string& id);

}  // namespace qmixlab::envs

#endif  // QMIXLAB_ENVS_POLICY_H_
