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

#ifndef QMIXLAB_QMIX_QMVI_H_
#define QMIXLAB_QMIX_QMVI_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/envs/policy.h"
#include "qmixlab/qlearn/agent.h"
#include "qmixlab/qmix/mixed_strategy.h"

namespace qmixlab::qmix {

// Exact learner-side dynamics against one opponent policy: the opponent's
// action distribution and the environment's chance events folded into a
// single (s', r) distribution per (s, a). Stored as CSR rows indexed by
// s * num_actions + a.
struct OpponentKernel {
  int num_states = 0;
  int num_actions = 0;
  std::vector<int64_t> row_start;
  std::vector<int> next;  // envs::kTerminalState for absorption
  std::vector<double> reward;
  std::vector<double> prob;

  int64_t row_begin(int s, int a) const {
    return row_start[static_cast<std::size_t>(s * num_actions + a)];
  }
  int64_t row_end(int s, int a) const {
    return row_start[static_cast<std::size_t>(s * num_actions + a + 1)];
  }
};

// Throws InvalidArgument("kernel requires tabular env") when the
// environment cannot enumerate its states.
OpponentKernel BuildOpponentKernel(const envs::Environment& env,
                                   const envs::Policy& opponent);

// Normalized visit frequencies over discrete observation keys.
class Occupancy {
 public:
  Occupancy() = default;
  explicit Occupancy(std::unordered_map<uint64_t, double> prob)
      : prob_(std::move(prob)) {}
  double Probability(uint64_t key) const;
  const std::unordered_map<uint64_t, double>& probabilities() const {
    return prob_;
  }
  double Total() const;

 private:
  std::unordered_map<uint64_t, double> prob_;
};

using VisitCounts = std::unordered_map<uint64_t, int64_t>;

// Learner-observation keys visited over `episodes` rollouts of the behavior
// agent against the opponent, counting every pre-step observation.
VisitCounts CountVisits(const envs::Environment& env,
                        const envs::Policy& opponent,
                        const qlearn::Agent& behavior, int episodes,
                        uint64_t seed);

// Occupancies from raw visit counts, one per opponent. With smoothing, one
// pseudo-visit is added for every key visited against any opponent so no
// opponent gets zero likelihood on a shared key.
std::vector<Occupancy> OccupanciesFromCounts(
    const std::vector<VisitCounts>& counts, bool smoothing);

// Unsmoothed occupancy of a single opponent.
Occupancy EstimateOccupancy(const envs::Environment& env,
                            const envs::Policy& opponent,
                            const qlearn::Agent& behavior, int episodes = 30,
                            uint64_t seed = 0);

// Row-major num_states x K belief table:
// psi(k|s) = sigma_k d_k(s) / sum_j sigma_j d_j(s), sigma where all are zero.
std::vector<double> OccupancyBeliefTable(const envs::EnumerableGame& game,
                                         const MixedStrategy& sigma,
                                         const std::vector<Occupancy>& occ);

struct QmviOptions {
  double gamma = 0.99;
  double tolerance = 1e-6;
  int max_iterations = 10000;
};

struct QmviResult {
  std::vector<double> v;    // per state
  std::vector<double> q;    // row-major num_states x num_actions
  std::vector<int> policy;  // greedy, ties to the lowest action
  int iterations = 0;
  std::vector<double> residuals;  // max_s |V_t(s) - V_{t-1}(s)| per sweep
};

// Q-mixing value iteration:
//   Q_t(s,a) = sum_k psi(k|s) sum_{s',r} T_k(s',r|s,a) [r + gamma V_{t-1}(s')]
//   V_t(s) = max_a Q_t(s,a)
// until the sup-norm change is <= tolerance. `psi` is num_states x K;
// `v0` (optional) seeds V_0. Throws NumericalError reporting the residual
// if max_iterations sweeps do not converge.
QmviResult QmviSolve(const std::vector<OpponentKernel>& kernels,
                     const std::vector<double>& psi,
                     const std::vector<double>* v0, const QmviOptions& options,
                     const std::function<void(int, double)>& on_iteration = {});

// V_0(s) = max_a sum_k sigma_k Q_k(s, a) from per-opponent tables.
std::vector<double> MixedInitialValues(const std::vector<const QmviResult*>& components,
                                       const std::vector<double>& sigma,
                                       int num_actions);

// psi that puts all weight on opponent k in every state.
std::vector<double> PointMassBelief(int num_states, int num_opponents, int k);

struct MixtureQmvi {
  std::vector<OpponentKernel> kernels;
  std::vector<QmviResult> components;  // exact BR to each pure opponent
  std::vector<Occupancy> occupancies;
  std::vector<double> psi;
  QmviResult mixed;
};

// The full pipeline against a mixture: kernels per opponent, a value
// iteration BR per opponent, occupancies of each BR against its opponent
// over `occupancy_episodes` rollouts, psi from those occupancies, then
// QMVI started from the sigma-mixed component values. sigma.ids() must
// equal pool.ids.
MixtureQmvi SolveMixtureQmvi(
    const envs::Environment& env, const envs::OpponentPool& pool,
    const MixedStrategy& sigma, const QmviOptions& options,
    int occupancy_episodes, bool smoothing, uint64_t seed,
    const std::function<void(int, double)>& on_iteration = {});

// Plays a state-indexed greedy policy.
class TablePolicyAgent final : public qlearn::Agent {
 public:
  TablePolicyAgent(const envs::EnumerableGame* game, std::vector<int> policy)
      : game_(game), policy_(std::move(policy)) {}
  int Act(const envs::Observation& obs,
          const qlearn::EpisodeContext& context) const override;

 private:
  const envs::EnumerableGame* game_;
  std::vector<int> policy_;
};

}  // namespace qmixlab::qmix

#endif  // QMIXLAB_QMIX_QMVI_H_
