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

#ifndef QMIXLAB_CLI_COMMANDS_H_
#define QMIXLAB_CLI_COMMANDS_H_

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "qmixlab/cli/config.h"
#include "qmixlab/envs/environment.h"
#include "qmixlab/qmix/mixed_strategy.h"
#include "qmixlab/qmix/mixing.h"

namespace qmixlab::cli {

// What every command needs. Artifacts live in config.output_dir; nothing
// existing is replaced unless `force` is set.
struct Context {
  ExperimentConfig config;
  bool force = false;
  std::ostream* log = nullptr;  // progress lines; may be null
};

// An opponent argument resolved against the registry: a single id, the
// literal "uniform", or a mixture literal.
struct Target {
  qmix::MixedStrategy sigma;
  std::string stem;  // artifact name component
  bool pure = false;
};
Target ResolveTarget(const std::string& arg, const std::vector<std::string>& ids);

// Filesystem-safe name for an opponent id.
std::string StemOf(const std::string& id);

std::string ModelPath(const ExperimentConfig& c, const std::string& stem);
std::string ReplayPath(const ExperimentConfig& c, const std::string& stem);
std::string ClassifierPath(const ExperimentConfig& c);

// Per-opponent BR Q-functions from the output directory. Throws
// MissingArtifact listing every absent path, InvalidArgument when a model
// does not fit the environment.
std::shared_ptr<const qmix::ComponentSet> LoadComponents(
    const ExperimentConfig& c, const envs::Environment& env);

struct TrainBrOutput {
  std::string model;
  std::string replay;
  std::string curve;
};
// Trains a BR to one opponent or a mixture and writes the model, its
// replay buffer and a (steps, mean_return) curve sampled every 5000 steps.
TrainBrOutput CmdTrainBr(const Context& ctx, const std::string& opponent);

// Writes the per-opponent BRs and BR(uniform).
void CmdTrainAll(const Context& ctx);

struct QmixEvalRequest {
  std::string mode = "prior";  // prior | opc
  std::string mixture;         // single evaluation when not coverage
  bool coverage = false;
  // BR stems added to a coverage sweep as fixed baselines, e.g. "uniform".
  std::vector<std::string> baselines;
};
// Returns the written report paths.
std::vector<std::string> CmdQmixEval(const Context& ctx,
                                     const QmixEvalRequest& request);

// QMVI against a mixture on a tabular environment: value, Q and policy
// tables, the residual log and greedy-policy returns against each pure
// opponent and the mixture.
std::vector<std::string> CmdQmvi(const Context& ctx, const std::string& mixture);

std::vector<std::string> CmdOpc(const Context& ctx);

// One student per temperature (the configured one when `temperatures` is
// empty), distilled from Q-Mixing-Prior over the mixture.
std::vector<std::string> CmdDistill(const Context& ctx,
                                    const std::string& mixture,
                                    const std::vector<double>& temperatures);

// End-to-end pipelines: BRs, QMVI (soccer only), classifier, students and
// coverage sweeps of Q-Mixing-Prior, Q-Mixing-OPC and BR(uniform).
void CmdBench(const Context& ctx);

}  // namespace qmixlab::cli

#endif  // QMIXLAB_CLI_COMMANDS_H_
