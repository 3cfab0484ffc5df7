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

#include "qmixlab/qmix/qmvi.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "qmixlab/common/error.h"
#include "qmixlab/qlearn/qfunction.h"
#include "qmixlab/qlearn/train.h"
#include "qmixlab/qmix/mixing.h"

namespace qmixlab::qmix {

OpponentKernel BuildOpponentKernel(const envs::Environment& env,
                                   const envs::Policy& opponent) {
  const envs::EnumerableGame* game = env.enumerable();
  if (game == nullptr) throw InvalidArgument("kernel requires tabular env");
  OpponentKernel k;
  k.num_states = game->NumStates();
  k.num_actions = env.num_actions();
  k.row_start.reserve(static_cast<std::size_t>(k.num_states) * k.num_actions + 1);
  k.row_start.push_back(0);
  std::vector<envs::Outcome> outcomes;
  std::map<std::pair<int, double>, double> merged;
  for (int s = 0; s < k.num_states; ++s) {
    const std::vector<double> pi =
        opponent.ActionProbabilities(game->StateObservation(s, 1));
    if (static_cast<int>(pi.size()) != env.opponent_num_actions()) {
      throw InvalidArgument("kernel: opponent returned " +
                            std::to_string(pi.size()) + " probabilities for " +
                            std::to_string(env.opponent_num_actions()) +
                            " actions");
    }
    for (int a = 0; a < k.num_actions; ++a) {
      merged.clear();
      for (std::size_t b = 0; b < pi.size(); ++b) {
        if (pi[b] <= 0.0) continue;
        outcomes.clear();
        game->Transitions(s, a, static_cast<int>(b), outcomes);
        for (const envs::Outcome& o : outcomes) {
          merged[{o.next, o.reward}] += pi[b] * o.prob;
        }
      }
      for (const auto& [key, p] : merged) {
        k.next.push_back(key.first);
        k.reward.push_back(key.second);
        k.prob.push_back(p);
      }
      k.row_start.push_back(static_cast<int64_t>(k.next.size()));
    }
  }
  return k;
}

double Occupancy::Probability(uint64_t key) const {
  auto it = prob_.find(key);
  return it == prob_.end() ? 0.0 : it->second;
}

double Occupancy::Total() const {
  double t = 0.0;
  for (const auto& [k, p] : prob_) t += p;
  return t;
}

VisitCounts CountVisits(const envs::Environment& env,
                        const envs::Policy& opponent,
                        const qlearn::Agent& behavior, int episodes,
                        uint64_t seed) {
  if (episodes < 1) throw InvalidArgument("occupancy: episodes must be >= 1");
  std::unique_ptr<envs::Environment> game = env.Clone();
  VisitCounts counts;
  for (int e = 0; e < episodes; ++e) {
    const qlearn::EpisodeSeeds seeds = qlearn::EvalEpisodeSeeds(seed, e);
    Rng dynamics_rng(seeds.dynamics);
    Rng opponent_rng(seeds.opponent_actions);
    game->Reset(seeds.reset);
    while (!game->terminal()) {
      const envs::Observation obs = game->Observe(0);
      ++counts[obs.key];
      const int a = behavior.Act(obs, qlearn::EpisodeContext{});
      const int b = opponent.Act(game->Observe(1), opponent_rng);
      game->Step(a, b, dynamics_rng);
    }
  }
  return counts;
}

std::vector<Occupancy> OccupanciesFromCounts(
    const std::vector<VisitCounts>& counts, bool smoothing) {
  std::vector<uint64_t> support;
  if (smoothing) {
    for (const VisitCounts& c : counts) {
      for (const auto& [key, n] : c) support.push_back(key);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
  }
  std::vector<Occupancy> out;
  for (const VisitCounts& c : counts) {
    std::unordered_map<uint64_t, double> mass;
    double total = 0.0;
    for (const auto& [key, n] : c) {
      mass[key] += static_cast<double>(n);
      total += static_cast<double>(n);
    }
    for (uint64_t key : support) {
      mass[key] += 1.0;
      total += 1.0;
    }
    if (total > 0.0) {
      for (auto& [key, p] : mass) p /= total;
    }
    out.emplace_back(std::move(mass));
  }
  return out;
}

Occupancy EstimateOccupancy(const envs::Environment& env,
                            const envs::Policy& opponent,
                            const qlearn::Agent& behavior, int episodes,
                            uint64_t seed) {
  return OccupanciesFromCounts(
      {CountVisits(env, opponent, behavior, episodes, seed)}, false)[0];
}

std::vector<double> OccupancyBeliefTable(const envs::EnumerableGame& game,
                                         const MixedStrategy& sigma,
                                         const std::vector<Occupancy>& occ) {
  if (static_cast<int>(occ.size()) != sigma.size()) {
    throw InvalidArgument("belief table: " + std::to_string(occ.size()) +
                          " occupancies for " + std::to_string(sigma.size()) +
                          " opponents");
  }
  const std::size_t k = occ.size();
  std::vector<double> psi(static_cast<std::size_t>(game.NumStates()) * k);
  std::vector<double> evidence(k);
  for (int s = 0; s < game.NumStates(); ++s) {
    const uint64_t key = game.StateObservation(s, 0).key;
    for (std::size_t j = 0; j < k; ++j) evidence[j] = occ[j].Probability(key);
    const OpponentBelief b = BeliefFromEvidence(sigma, evidence);
    std::copy(b.weights().begin(), b.weights().end(),
              psi.begin() + static_cast<std::ptrdiff_t>(s * k));
  }
  return psi;
}

QmviResult QmviSolve(const std::vector<OpponentKernel>& kernels,
                     const std::vector<double>& psi,
                     const std::vector<double>* v0, const QmviOptions& options,
                     const std::function<void(int, double)>& on_iteration) {
  if (kernels.empty()) throw InvalidArgument("qmvi: no kernels");
  const int num_states = kernels[0].num_states;
  const int num_actions = kernels[0].num_actions;
  for (const OpponentKernel& k : kernels) {
    if (k.num_states != num_states || k.num_actions != num_actions) {
      throw InvalidArgument("qmvi: kernels disagree on state/action counts");
    }
  }
  const std::size_t K = kernels.size();
  const std::size_t S = static_cast<std::size_t>(num_states);
  const std::size_t A = static_cast<std::size_t>(num_actions);
  if (psi.size() != S * K) {
    throw InvalidArgument("qmvi: belief table has " + std::to_string(psi.size()) +
                          " entries, expected " + std::to_string(S * K));
  }
  if (!(options.gamma >= 0.0 && options.gamma <= 1.0)) {
    throw InvalidArgument("qmvi: gamma must be in [0, 1]");
  }
  if (!(options.tolerance > 0.0)) {
    throw InvalidArgument("qmvi: tolerance must be > 0");
  }
  QmviResult result;
  result.v.assign(S, 0.0);
  if (v0 != nullptr) {
    if (v0->size() != S) throw InvalidArgument("qmvi: V0 has wrong size");
    result.v = *v0;
  }
  result.q.assign(S * A, 0.0);
  std::vector<double> v_next(S);
  const double gamma = options.gamma;
  for (int it = 1; it <= options.max_iterations; ++it) {
    double residual = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      const double* w = psi.data() + s * K;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < A; ++a) {
        double q = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
          if (w[j] == 0.0) continue;
          const OpponentKernel& ker = kernels[j];
          const int64_t end = ker.row_end(static_cast<int>(s), static_cast<int>(a));
          double backup = 0.0;
          for (int64_t i = ker.row_begin(static_cast<int>(s), static_cast<int>(a));
               i < end; ++i) {
            const int n = ker.next[static_cast<std::size_t>(i)];
            const double future =
                n == envs::kTerminalState ? 0.0 : result.v[static_cast<std::size_t>(n)];
            backup += ker.prob[static_cast<std::size_t>(i)] *
                      (ker.reward[static_cast<std::size_t>(i)] + gamma * future);
          }
          q += w[j] * backup;
        }
        result.q[s * A + a] = q;
        best = std::max(best, q);
      }
      v_next[s] = best;
      residual = std::max(residual, std::abs(best - result.v[s]));
    }
    result.v.swap(v_next);
    result.residuals.push_back(residual);
    result.iterations = it;
    if (on_iteration) on_iteration(it, residual);
    if (!std::isfinite(residual)) {
      throw NumericalError("qmvi: non-finite residual at iteration " +
                           std::to_string(it));
    }
    if (residual <= options.tolerance) {
      result.policy.resize(S);
      for (std::size_t s = 0; s < S; ++s) {
        result.policy[s] = qlearn::GreedyAction(
            std::span<const double>(result.q).subspan(s * A, A));
      }
      return result;
    }
  }
  throw NumericalError("qmvi: no convergence after " +
                       std::to_string(options.max_iterations) +
                       " iterations (residual " +
                       std::to_string(result.residuals.back()) + ")");
}

std::vector<double> MixedInitialValues(
    const std::vector<const QmviResult*>& components,
    const std::vector<double>& sigma, int num_actions) {
  if (components.size() != sigma.size() || components.empty()) {
    throw InvalidArgument("initial values: components and weights differ");
  }
  const std::size_t A = static_cast<std::size_t>(num_actions);
  const std::size_t S = components[0]->q.size() / A;
  std::vector<double> v(S);
  std::vector<double> mixed(A);
  for (std::size_t s = 0; s < S; ++s) {
    std::fill(mixed.begin(), mixed.end(), 0.0);
    for (std::size_t k = 0; k < components.size(); ++k) {
      for (std::size_t a = 0; a < A; ++a) {
        mixed[a] += sigma[k] * components[k]->q[s * A + a];
      }
    }
    v[s] = *std::max_element(mixed.begin(), mixed.end());
  }
  return v;
}

std::vector<double> PointMassBelief(int num_states, int num_opponents, int k) {
  std::vector<double> psi(
      static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_opponents),
      0.0);
  for (int s = 0; s < num_states; ++s) {
    psi[static_cast<std::size_t>(s * num_opponents + k)] = 1.0;
  }
  return psi;
}

MixtureQmvi SolveMixtureQmvi(const envs::Environment& env,
                             const envs::OpponentPool& pool,
                             const MixedStrategy& sigma,
                             const QmviOptions& options, int occupancy_episodes,
                             bool smoothing, uint64_t seed,
                             const std::function<void(int, double)>& on_iteration) {
  const envs::EnumerableGame* game = env.enumerable();
  if (game == nullptr) throw InvalidArgument("kernel requires tabular env");
  if (sigma.ids() != pool.ids) {
    throw InvalidArgument("qmvi: mixture ids do not match the opponent pool");
  }
  const int k_count = pool.size();
  MixtureQmvi out;
  for (const auto& policy : pool.policies) {
    out.kernels.push_back(BuildOpponentKernel(env, *policy));
  }
  std::vector<VisitCounts> counts;
  for (int k = 0; k < k_count; ++k) {
    out.components.push_back(QmviSolve(
        out.kernels, PointMassBelief(game->NumStates(), k_count, k), nullptr,
        options));
    const TablePolicyAgent br(game, out.components.back().policy);
    counts.push_back(CountVisits(env, *pool.policies[static_cast<std::size_t>(k)],
                                 br, occupancy_episodes,
                                 DeriveSeed(seed, {static_cast<uint64_t>(k)})));
  }
  out.occupancies = OccupanciesFromCounts(counts, smoothing);
  out.psi = OccupancyBeliefTable(*game, sigma, out.occupancies);
  std::vector<const QmviResult*> parts;
  for (const QmviResult& r : out.components) parts.push_back(&r);
  const std::vector<double> v0 =
      MixedInitialValues(parts, sigma.weights(), env.num_actions());
  out.mixed = QmviSolve(out.kernels, out.psi, &v0, options, on_iteration);
  return out;
}

int TablePolicyAgent::Act(const envs::Observation& obs,
                          const qlearn::EpisodeContext&) const {
  const int s = game_->StateIndexOfKey(obs.key);
  if (s < 0) throw InvalidArgument("table policy: unknown observation");
  return policy_[static_cast<std::size_t>(s)];
}

}  // namespace qmixlab::qmix
