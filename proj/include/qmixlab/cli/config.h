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

#ifndef QMIXLAB_CLI_CONFIG_H_
#define QMIXLAB_CLI_CONFIG_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qmixlab/distill/distill.h"
#include "qmixlab/envs/commons.h"
#include "qmixlab/envs/environment.h"
#include "qmixlab/opc/classifier.h"
#include "qmixlab/qlearn/train.h"
#include "qmixlab/qmix/qmvi.h"

namespace qmixlab::cli {

struct ExperimentConfig {
  std::string env = "soccer";
  int soccer_horizon = 100;
  envs::CommonsConfig commons;
  std::string commons_map;  // empty: built-in map

  // Opponent registry: scripted ids or qlearner:<model path>. Empty means
  // every scripted opponent of the environment.
  std::vector<std::string> opponents;

  qlearn::TrainConfig train;
  // Pure-strategy BRs get train.timesteps / K each, so the set of K BRs
  // costs as much as one BR against a mixture.
  bool equal_budget = true;

  opc::ClassifierConfig opc;
  std::string opc_kind = "network";  // network | tabular

  distill::DistillConfig distill;

  qmix::QmviOptions qmvi;
  int occupancy_episodes = 30;
  bool occupancy_smoothing = true;

  double grid_step = 0.1;
  int eval_episodes = 30;
  int eval_seeds = 5;
  int threads = 0;  // 0: QMIXLAB_THREADS or hardware concurrency

  std::string output_dir = "runs";
  uint64_t seed = 0;

  // Throws InvalidArgument for out-of-range fields and MissingArtifact for
  // a qlearner opponent whose model file does not exist.
  void Validate() const;

  std::unique_ptr<envs::Environment> MakeEnvironment() const;
  // opponents, or the scripted ids when it is empty.
  std::vector<std::string> OpponentIds() const;
  std::vector<uint64_t> EvalSeedList() const;
  // Budget of one pure-strategy BR.
  int64_t PureTimesteps() const;
};

// One settable key, e.g. "train.learning_rate".
struct ConfigKey {
  std::string name;
  std::string help;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

const std::vector<ConfigKey>& ConfigKeys();

// Defaults for an environment: the soccer or commons training settings.
ExperimentConfig DefaultConfig(const std::string& env);

// Builds a config from key/value pairs on top of the defaults for
// values["env"] (soccer if absent). Throws InvalidArgument naming the key
// for an unknown key or an unparsable value, then validates.
ExperimentConfig ResolveConfig(const std::map<std::string, std::string>& values);

// Reads an INI file: "[train]\nlearning_rate = 3e-4" gives
// "train.learning_rate"; keys before any section are top level.
std::map<std::string, std::string> ReadIniFile(const std::string& path);

// QMIXLAB_SEED, if set, replaces "seed".
void ApplyEnvironmentOverrides(std::map<std::string, std::string>& values);

// key = value lines for every key, loadable by ReadIniFile.
std::string ConfigToIni(const ExperimentConfig& config);

}  // namespace qmixlab::cli

#endif  // QMIXLAB_CLI_CONFIG_H_
