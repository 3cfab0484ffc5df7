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

#ifndef QMIXLAB_QLEARN_OPPONENTS_H_
#define QMIXLAB_QLEARN_OPPONENTS_H_

#include <memory>
#include <string>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/envs/policy.h"

namespace qmixlab::qlearn {

// Resolves an opponent id: any scripted id, or "qlearner:<model path>" for
// a saved Q-function played greedily from the opponent seat.
std::shared_ptr<const envs::Policy> MakeOpponent(const envs::Environment& env,
                                                 const std::string& id);

envs::OpponentPool MakeOpponentPool(const envs::Environment& env,
                                    const std::vector<std::string>& ids);

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_OPPONENTS_H_
