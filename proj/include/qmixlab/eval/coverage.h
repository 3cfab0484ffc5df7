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

#ifndef QMIXLAB_EVAL_COVERAGE_H_
#define QMIXLAB_EVAL_COVERAGE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/envs/policy.h"
#include "qmixlab/qlearn/agent.h"
#include "qmixlab/qmix/mixed_strategy.h"

namespace qmixlab::eval {

using MixtureGrid = std::vector<qmix::MixedStrategy>;

// Every composition of round(1/step) units into ids.size() parts, scaled by
// step, in ascending lexicographic order of the unit counts. Throws
// InvalidArgument unless 1/step is an integer.
MixtureGrid EnumerateMixtures(const std::vector<std::string>& ids,
                              double step = 0.1);

// Number of grid points, C(units + K - 1, K - 1).
uint64_t MixtureCount(int k, int units);

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
  int n = 0;
  double t = 0.0;
};

// Two-sided 95% Student t multiplier for n samples, rounded to three
// decimals the way t tables print it (2.776 for n = 5).
double StudentT95(int n);

// mean +- t s / sqrt(n) with the n-1 sample deviation; t defaults to
// StudentT95(n). Throws InvalidArgument for n < 2.
ConfidenceInterval MakeConfidenceInterval(const std::vector<double>& means,
                                          double t = 0.0);

// Builds the agent for a seed index and mixture. Called from worker
// threads, so it must not mutate shared state.
using AgentFactory = std::function<std::shared_ptr<const qlearn::Agent>(
    std::size_t seed_index, const qmix::MixedStrategy& sigma)>;

// A named policy under evaluation: one agent per seed, a single agent used
// for every seed, or (when `factory` is set) an agent built per mixture, as
// Q-mixing needs.
struct SweepMethod {
  std::string name;
  std::vector<std::shared_ptr<const qlearn::Agent>> agents;
  AgentFactory factory;
};

struct SweepConfig {
  int episodes = 30;
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4};
  int threads = 0;  // 0: DefaultThreadCount()
};

struct CoverageCell {
  std::vector<double> seed_means;  // aligned with the report's seeds
  double mean = 0.0;               // mean of the seed means
  double half_width = 0.0;         // 0 with a single seed
};

struct CoverageReport {
  std::vector<std::string> methods;
  MixtureGrid grid;
  std::vector<uint64_t> seeds;
  std::vector<std::vector<CoverageCell>> cells;  // [method][mixture]

  // Mixture indices by descending aggregate mean for one method; ties keep
  // grid order.
  std::vector<int> SortedOrder(int method) const;
  // Mean over the grid of a method's aggregate means.
  double GridAverage(int method) const;
};

// Seed of the evaluation of mixture j under base seed s. Methods share it,
// so every method meets the same opponent draws and initial states.
uint64_t SweepTaskSeed(uint64_t seed, int mixture_index);

// Evaluates every method against every mixture for each seed, resampling
// the opponent per episode. Each (seed, method, mixture) task is seeded by
// SweepTaskSeed and runs in parallel; results do not depend on the
// schedule. Throws InvalidArgument before simulating if a method cannot act
// in the environment or has the wrong number of agents.
CoverageReport CoverageSweep(const envs::Environment& env,
                             const std::vector<SweepMethod>& methods,
                             const envs::OpponentPool& pool,
                             const MixtureGrid& grid,
                             const SweepConfig& config);

// Comma-separated files with a header row; mixtures in the literal format
// (quoted), reals with six significant digits.
//   per-seed: method,mixture,seed,mean_return
//   sorted:   method,rank,mixture,aggregate_mean,ci_halfwidth
std::string PerSeedCsv(const CoverageReport& report);
std::string SortedCurveCsv(const CoverageReport& report);

// Writes <prefix>_per_seed.csv and <prefix>_sorted.csv.
void EmitReport(const CoverageReport& report, const std::string& prefix,
                bool force);

// Rebuilds a report from the per-seed file; aggregates are recomputed from
// the parsed seed means. Throws CorruptDocument for malformed input.
CoverageReport ParsePerSeedCsv(const std::string& text,
                               const std::vector<std::string>& ids);

struct SortedRow {
  std::string method;
  int rank = 0;
  std::string mixture;
  double aggregate_mean = 0.0;
  double ci_halfwidth = 0.0;
};
std::vector<SortedRow> ParseSortedCurveCsv(const std::string& text);

}  // namespace qmixlab::eval

#endif  // QMIXLAB_EVAL_COVERAGE_H_
