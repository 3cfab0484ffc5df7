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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Budgets are the desk-scale ones; every random quantity is seeded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "qmixlab/common/parallel.h"
#include "qmixlab/common/random.h"
#include "qmixlab/distill/distill.h"
#include "qmixlab/envs/commons.h"
#include "qmixlab/envs/soccer.h"
#include "qmixlab/eval/coverage.h"
#include "qmixlab/opc/classifier.h"
#include "qmixlab/opc/dataset.h"
#include "qmixlab/qlearn/mlp.h"
#include "qmixlab/qlearn/opponents.h"
#include "qmixlab/qlearn/train.h"
#include "qmixlab/qmix/mixing.h"
#include "qmixlab/qmix/qmvi.h"

namespace qmixlab {
namespace {

using envs::Observation;
using qlearn::QFunction;
using qlearn::ReplayBuffer;
using qmix::ComponentSet;
using qmix::MixedStrategy;

constexpr uint64_t kSeed = 20240601;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::vector<int> failed;

void Report(int id, bool pass, double seconds, double budget,
            const std::string& detail) {
  const bool in_time = seconds < budget;
  const bool ok = pass && in_time;
  if (!ok) failed.push_back(id);
  std::printf("[%s] criterion %d: %s (%.1f s of %.0f s)%s\n",
              ok ? "PASS" : "FAIL", id, detail.c_str(), seconds, budget,
              pass && !in_time ? " over time budget" : "");
  std::fflush(stdout);
}

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> RandomSimplex(int n, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = Uniform01(rng) + 1e-3;
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= z;
  return w;
}

Observation SingleCell() {
  Observation o;
  o.size = 1;
  o.active = {0};
  return o;
}

// Prior mixing on one-shot games against brute-force expectation over the
// joint (opponent, opponent action) draw, summed in long double.
void PriorMixingExactness() {
  Timer timer;
  Rng rng(DeriveSeed(kSeed, {1}));
  double worst = 0.0;
  for (int instance = 0; instance < 1000; ++instance) {
    const int k_count = 2 + UniformInt(rng, 4);
    const int arms = 2 + UniformInt(rng, 9);
    const int opp_actions = 2 + UniformInt(rng, 4);
    std::vector<std::vector<double>> payoff(static_cast<std::size_t>(arms));
    for (auto& row : payoff) {
      row.resize(static_cast<std::size_t>(opp_actions));
      for (double& x : row) x = 20.0 * Uniform01(rng) - 10.0;
    }
    std::vector<std::vector<double>> policies;
    std::vector<std::string> ids;
    std::vector<std::shared_ptr<const QFunction>> qs;
    for (int k = 0; k < k_count; ++k) {
      policies.push_back(RandomSimplex(opp_actions, rng));
      auto q = std::make_shared<QFunction>(QFunction::Tabular(1, arms));
      std::vector<double>& row = q->Row(0);
      for (int a = 0; a < arms; ++a) {
        for (int b = 0; b < opp_actions; ++b) {
          row[a] += policies[k][b] * payoff[a][b];
        }
      }
      ids.push_back("k" + std::to_string(k));
      qs.push_back(q);
    }
    std::vector<double> w = RandomSimplex(k_count, rng);
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    const ComponentSet comps(ids, qs);
    const MixedStrategy sigma(ids, w);
    const std::vector<double> mixed = qmix::MixQPrior(SingleCell(), comps, sigma);
    for (int a = 0; a < arms; ++a) {
      long double oracle = 0.0L;
      for (int k = 0; k < k_count; ++k) {
        for (int b = 0; b < opp_actions; ++b) {
          oracle += static_cast<long double>(w[k]) * policies[k][b] * payoff[a][b];
        }
      }
      worst = std::max(worst, static_cast<double>(std::fabs(mixed[a] - oracle)));
    }
  }
  Report(1, worst <= 1e-12, timer.Seconds(), 1.0,
         Fmt("prior mixing vs expectation oracle, 1000 instances, max error %.3g",
             worst));
}

// Tabular BRs to the three scripted opponents plus BR(uniform) at equal total
// budget, one set per seed.
struct TabularRun {
  std::shared_ptr<const ComponentSet> comps;
  std::shared_ptr<const QFunction> uniform_br;
  std::vector<ReplayBuffer> buffers;  // per opponent
};

qlearn::TrainConfig TabularConfig(int64_t steps, uint64_t seed) {
  qlearn::TrainConfig c = qlearn::TrainConfig::SoccerDefaults();
  c.variant = qlearn::QVariant::kTabular;
  c.timesteps = steps;
  c.seed = seed;
  return c;
}

TabularRun TrainTabularRun(const envs::Environment& env,
                           const envs::OpponentPool& pool, int64_t total,
                           uint64_t seed) {
  TabularRun run;
  std::vector<std::shared_ptr<const QFunction>> qs;
  const int64_t per = total / pool.size();
  for (int k = 0; k < pool.size(); ++k) {
    auto r = qlearn::TrainBestResponse(
        env, pool, MixedStrategy::PointMass(pool.ids, k),
        TabularConfig(per, DeriveSeed(seed, {static_cast<uint64_t>(k)})));
    qs.push_back(std::make_shared<QFunction>(std::move(r.q)));
    run.buffers.push_back(std::move(r.buffer));
  }
  run.comps = std::make_shared<ComponentSet>(pool.ids, qs);
  auto u = qlearn::TrainBestResponse(env, pool, MixedStrategy::Uniform(pool.ids),
                                     TabularConfig(total, DeriveSeed(seed, {99})));
  run.uniform_br = std::make_shared<QFunction>(std::move(u.q));
  return run;
}

// Greedy prior mixing under a point mass against the component itself, on
// buffer observations, for trained tables and random networks.
void PointMassIdentity(const TabularRun& run) {
  Timer timer;
  std::vector<Observation> observations;
  for (const ReplayBuffer& b : run.buffers) {
    for (std::size_t i = 0; i < b.size(); ++i) observations.push_back(b[i].obs);
  }
  Rng rng(DeriveSeed(kSeed, {2}));
  std::vector<std::shared_ptr<const QFunction>> nets;
  for (int k = 0; k < 3; ++k) {
    nets.push_back(std::make_shared<QFunction>(QFunction::RandomMlp(
        envs::kSoccerObservationSize, envs::kSoccerActions, {50, 50}, rng)));
  }
  const std::vector<std::shared_ptr<const ComponentSet>> sets{
      run.comps,
      std::make_shared<ComponentSet>(std::vector<std::string>{"a", "b", "c"},
                                     nets)};
  int64_t checked = 0;
  int64_t agree = 0;
  for (const auto& comps : sets) {
    for (int k = 0; k < comps->size(); ++k) {
      const MixedStrategy sigma = MixedStrategy::PointMass(comps->ids(), k);
      for (const Observation& obs : observations) {
        const int mixed = qlearn::GreedyAction(qmix::MixQPrior(obs, *comps, sigma));
        const int single = qlearn::GreedyAction(comps->q(k).Values(obs));
        agree += mixed == single;
        ++checked;
      }
    }
  }
  Report(2, agree == checked, timer.Seconds(), 10.0,
         Fmt("point-mass greedy identity on %lld observation/component pairs, "
             "%lld disagreements",
             static_cast<long long>(checked),
             static_cast<long long>(checked - agree)));
}

// QMVI against (0.5, 0.5) of two scripted opponents, compared with the
// direct tabular BR (value iteration on the exact kernel) per target.
struct QmviCheck {
  bool converged = false;
  int iterations = 0;
  bool within = true;
  std::string detail;
};

QmviCheck CheckQmviPair(const envs::SoccerGame& game,
                        const std::vector<std::string>& ids, int episodes) {
  QmviCheck out;
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(game, ids);
  const MixedStrategy mix(ids, {0.5, 0.5});
  qmix::MixtureQmvi solved;
  try {
    solved = qmix::SolveMixtureQmvi(game, pool, mix, {}, 30, true,
                                    DeriveSeed(kSeed, {3}));
  } catch (const std::exception& e) {
    out.detail = std::string("qmvi failed: ") + e.what();
    out.within = false;
    return out;
  }
  out.converged = solved.mixed.residuals.back() <= 1e-6 &&
                  solved.mixed.iterations <= 10000;
  out.iterations = solved.mixed.iterations;
  std::vector<double> flat;
  for (int s = 0; s < game.NumStates(); ++s) {
    for (double w : mix.weights()) flat.push_back(w);
  }
  const qmix::QmviResult mix_br = qmix::QmviSolve(solved.kernels, flat, nullptr, {});
  const qmix::TablePolicyAgent qmvi_agent(&game, solved.mixed.policy);

  const std::vector<std::string> names{ids[0], ids[1], "mixture"};
  for (int t = 0; t < 3; ++t) {
    const MixedStrategy sigma = t < 2 ? MixedStrategy::PointMass(ids, t) : mix;
    const std::vector<int>& br_policy =
        t < 2 ? solved.components[static_cast<std::size_t>(t)].policy
              : mix_br.policy;
    const qmix::TablePolicyAgent br_agent(&game, br_policy);
    const uint64_t seed = DeriveSeed(kSeed, {4, static_cast<uint64_t>(t)});
    const auto q = qlearn::EvaluateAgent(game, qmvi_agent, pool, sigma, episodes, seed);
    const auto b = qlearn::EvaluateAgent(game, br_agent, pool, sigma, episodes, seed);
    const eval::ConfidenceInterval ci = eval::MakeConfidenceInterval(b.returns);
    const bool ok = std::fabs(q.mean - ci.mean) <= ci.half_width;
    out.within = out.within && ok;
    out.detail += Fmt("%s%s qmvi %.3f br %.3f+-%.3f", t ? "; " : "",
                      names[static_cast<std::size_t>(t)].c_str(), q.mean,
                      ci.mean, ci.half_width);
  }
  return out;
}

void QmviBestResponds() {
  Timer timer;
  envs::SoccerGame game;
  const QmviCheck main = CheckQmviPair(game, {"chaser", "interceptor"}, 500);
  Report(3, main.converged && main.within, timer.Seconds(), 600.0,
         Fmt("QMVI chaser/interceptor (0.5,0.5): %s in %d sweeps; %s",
             main.converged ? "converged" : "did not converge", main.iterations,
             main.detail.c_str()));
  // Every pair of scripted opponents, for the record only.
  const std::vector<std::string> all = envs::ScriptedOpponentIds("soccer");
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const QmviCheck c = CheckQmviPair(game, {all[i], all[j]}, 200);
      std::printf("    info qmvi %s/%s: %s, %d sweeps, %s; %s\n", all[i].c_str(),
                  all[j].c_str(), c.converged ? "converged" : "no convergence",
                  c.iterations, c.within ? "within CI" : "outside CI",
                  c.detail.c_str());
    }
  }
  std::fflush(stdout);
}

void Coverage(const std::vector<TabularRun>& runs,
              const envs::Environment& env, const envs::OpponentPool& pool,
              double training_seconds) {
  Timer timer;
  eval::SweepMethod prior{"qmix_prior", {}, {}};
  prior.factory = [&runs](std::size_t s, const MixedStrategy& sigma) {
    return std::make_shared<const qmix::QMixPriorAgent>(runs[s].comps, sigma);
  };
  eval::SweepMethod br{"br_uniform", {}, {}};
  for (const TabularRun& r : runs) {
    br.agents.push_back(std::make_shared<qlearn::GreedyQAgent>(r.uniform_br));
  }
  eval::SweepConfig config;
  config.episodes = 30;
  config.seeds.clear();
  for (std::size_t s = 0; s < runs.size(); ++s) {
    config.seeds.push_back(DeriveSeed(kSeed, {5, s}));
  }
  const eval::MixtureGrid grid = eval::EnumerateMixtures(pool.ids, 0.1);
  const eval::CoverageReport report =
      eval::CoverageSweep(env, {prior, br}, pool, grid, config);
  std::vector<double> br_seed_avg(runs.size(), 0.0);
  for (std::size_t s = 0; s < runs.size(); ++s) {
    for (const auto& cell : report.cells[1]) br_seed_avg[s] += cell.seed_means[s];
    br_seed_avg[s] /= static_cast<double>(grid.size());
  }
  const eval::ConfidenceInterval ci = eval::MakeConfidenceInterval(br_seed_avg);
  const double prior_avg = report.GridAverage(0);
  for (std::size_t s = 0; s < runs.size(); ++s) {
    double prior_seed = 0.0;
    for (const auto& cell : report.cells[0]) prior_seed += cell.seed_means[s];
    std::printf("    info coverage seed %zu: qmix_prior %.4f br_uniform %.4f\n", s,
                prior_seed / static_cast<double>(grid.size()), br_seed_avg[s]);
  }
  Report(4, prior_avg >= ci.mean - ci.half_width && grid.size() == 66,
         timer.Seconds() + training_seconds, 900.0,
         Fmt("coverage over %zu mixtures, 5 seeds: qmix_prior %.4f vs "
             "br_uniform %.4f-%.4f",
             grid.size(), prior_avg, ci.mean, ci.half_width));
}

// Finite differences skip parameters whose probe flips a ReLU, where the
// loss is not differentiable.
std::vector<bool> ActivationPattern(const qlearn::Mlp& net,
                                    const std::vector<std::vector<double>>& xs) {
  std::vector<bool> out;
  qlearn::Mlp::Trace trace;
  for (const auto& x : xs) {
    net.Forward(std::span<const double>(x), trace);
    for (std::size_t l = 0; l + 1 < trace.pre.size(); ++l) {
      for (double v : trace.pre[l]) out.push_back(v > 0.0);
    }
  }
  return out;
}

double TdLoss(const qlearn::Mlp& net, const std::vector<std::vector<double>>& xs,
              const std::vector<int>& actions, const std::vector<double>& y) {
  double loss = 0.0;
  for (std::size_t b = 0; b < xs.size(); ++b) {
    const double q = net.Forward(std::span<const double>(xs[b]))
                         [static_cast<std::size_t>(actions[b])];
    loss += (q - y[b]) * (q - y[b]);
  }
  return loss / static_cast<double>(xs.size());
}

void GradientChecks() {
  Timer timer;
  constexpr double kH = 1e-5;
  double td_worst = 0.0;
  int64_t td_checked = 0;
  int64_t td_skipped = 0;
  for (int instance = 0; instance < 100; ++instance) {
    Rng rng(DeriveSeed(kSeed, {6, static_cast<uint64_t>(instance)}));
    const int in = 2 + UniformInt(rng, 10);
    const int out = 2 + UniformInt(rng, 6);
    qlearn::Mlp net = qlearn::Mlp::Initialized({in, 50, 50, out}, rng);
    for (int l = 0; l < net.num_layers(); ++l) {
      for (double& b : net.biases(l)) b = 0.2 * (Uniform01(rng) - 0.5);
    }
    const int batch = 1 + UniformInt(rng, 8);
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(batch));
    std::vector<int> actions;
    std::vector<double> y;
    for (auto& x : xs) {
      x.resize(static_cast<std::size_t>(in));
      for (double& v : x) v = 2.0 * Uniform01(rng) - 1.0;
      actions.push_back(UniformInt(rng, out));
      y.push_back(2.0 * Uniform01(rng) - 1.0);
    }
    std::vector<qlearn::MlpInput> inputs;
    for (const auto& x : xs) inputs.emplace_back(std::span<const double>(x));
    std::vector<double> grad(net.num_parameters());
    qlearn::TdLossGradient(net, inputs, actions, y, grad);
    const std::vector<bool> pattern = ActivationPattern(net, xs);
    std::span<double> params = net.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + kH;
      const bool kink_plus = ActivationPattern(net, xs) != pattern;
      const double lp = TdLoss(net, xs, actions, y);
      params[i] = saved - kH;
      const bool kink_minus = ActivationPattern(net, xs) != pattern;
      const double lm = TdLoss(net, xs, actions, y);
      params[i] = saved;
      if (kink_plus || kink_minus) {
        ++td_skipped;
        continue;
      }
      const double fd = (lp - lm) / (2.0 * kH);
      td_worst = std::max(td_worst, std::fabs(fd - grad[i]) /
                                        std::max({std::fabs(fd),
                                                  std::fabs(grad[i]), 1e-6}));
      ++td_checked;
    }
  }

  double kl_worst = 0.0;
  Rng rng(DeriveSeed(kSeed, {7}));
  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 2 + static_cast<std::size_t>(UniformInt(rng, 9));
    std::vector<double> t(n), s(n), g(n);
    for (double& x : t) x = 4.0 * Uniform01(rng) - 2.0;
    for (double& x : s) x = 4.0 * Uniform01(rng) - 2.0;
    const double tau = 0.3 + 3.0 * Uniform01(rng);
    distill::DistillLossGradient(t, s, tau, g);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> up = s, down = s;
      up[a] += 1e-6;
      down[a] -= 1e-6;
      const double fd = (distill::DistillLoss(t, up, tau) -
                         distill::DistillLoss(t, down, tau)) / 2e-6;
      kl_worst = std::max(kl_worst, std::fabs(fd - g[a]) /
                                        std::max({std::fabs(fd),
                                                  std::fabs(g[a]), 1e-3}));
    }
  }
  // A handful of kink-crossing probes is expected; many would mean the check
  // is not looking at the gradient at all.
  const bool enough = td_skipped * 100 < td_checked;
  Report(5, td_worst <= 1e-4 && kl_worst <= 1e-4 && enough, timer.Seconds(),
         30.0,
         Fmt("finite differences: TD max rel %.2g over %lld params (%lld at "
             "kinks skipped), distill max rel %.2g",
             td_worst, static_cast<long long>(td_checked),
             static_cast<long long>(td_skipped), kl_worst));
}

void Distillation() {
  Timer timer;
  envs::SoccerGame game;
  const std::vector<std::string> ids{"chaser", "camper", "interceptor"};
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(game, ids);
  std::vector<std::shared_ptr<const QFunction>> qs;
  std::vector<ReplayBuffer> buffers(ids.size());
  std::vector<QFunction> trained(ids.size());
  ParallelFor(ids.size(), [&](std::size_t k) {
    qlearn::TrainConfig c = qlearn::TrainConfig::SoccerDefaults();
    c.timesteps = 60000;
    c.seed = DeriveSeed(kSeed, {8, k});
    auto r = qlearn::TrainBestResponse(
        game, pool, MixedStrategy::PointMass(ids, static_cast<int>(k)), c);
    trained[k] = std::move(r.q);
    buffers[k] = std::move(r.buffer);
  });
  for (QFunction& q : trained) qs.push_back(std::make_shared<QFunction>(std::move(q)));
  auto comps = std::make_shared<ComponentSet>(ids, qs);
  const MixedStrategy uniform = MixedStrategy::Uniform(ids);
  const distill::Teacher teacher = distill::PriorTeacher(comps, uniform);
  const qmix::QMixPriorAgent teacher_agent(comps, uniform);
  std::vector<const ReplayBuffer*> views;
  for (const ReplayBuffer& b : buffers) views.push_back(&b);

  // States the teacher itself visits against the uniform mixture, weighted
  // by visit count, to compare with agreement on buffer observations.
  struct Visited {
    Observation obs;
    double weight;
    int action;
  };
  std::vector<Visited> visited;
  for (int k = 0; k < pool.size(); ++k) {
    const qmix::VisitCounts counts = qmix::CountVisits(
        game, *pool.policies[static_cast<std::size_t>(k)], teacher_agent, 100,
        DeriveSeed(kSeed, {20, static_cast<uint64_t>(k)}));
    for (const auto& [key, n] : counts) {
      const Observation obs =
          game.StateObservation(game.StateIndexOfKey(key), 0);
      visited.push_back({obs, static_cast<double>(n), qlearn::GreedyAction(teacher(obs))});
    }
  }

  constexpr int kSeeds = 5;
  std::vector<double> agreement(kSeeds), on_policy(kSeeds), student_means(kSeeds),
      teacher_means(kSeeds);
  ParallelFor(kSeeds, [&](std::size_t s) {
    distill::DistillConfig c;
    c.seed = DeriveSeed(kSeed, {9, s});
    const distill::DistillResult r =
        distill::TrainStudent(teacher, envs::kSoccerActions, views, c);
    agreement[s] = r.held_out_agreement;
    double hit = 0.0, total = 0.0;
    for (const Visited& v : visited) {
      hit += v.weight * (qlearn::GreedyAction(r.student.Values(v.obs)) == v.action);
      total += v.weight;
    }
    on_policy[s] = hit / total;
    const uint64_t eval_seed = DeriveSeed(kSeed, {10, s});
    const qlearn::GreedyQAgent student(std::make_shared<QFunction>(r.student));
    student_means[s] =
        qlearn::EvaluateAgent(game, student, pool, uniform, 100, eval_seed).mean;
    teacher_means[s] =
        qlearn::EvaluateAgent(game, teacher_agent, pool, uniform, 100, eval_seed)
            .mean;
  });
  const eval::ConfidenceInterval ci = eval::MakeConfidenceInterval(teacher_means);
  const double student = Mean(student_means);
  const double min_agree = *std::min_element(agreement.begin(), agreement.end());
  const bool ok = min_agree >= 0.90 && std::fabs(student - ci.mean) <= ci.half_width;
  for (int s = 0; s < kSeeds; ++s) {
    std::printf(
        "    info distill seed %d: held-out agreement %.4f, on teacher "
        "trajectories %.4f; student %.3f teacher %.3f\n",
        s, agreement[s], on_policy[s], student_means[s], teacher_means[s]);
  }
  Report(6, ok, timer.Seconds(), 1200.0,
         Fmt("distillation, 5 seeds: held-out agreement min %.3f mean %.3f; "
             "student %.3f vs teacher %.3f+-%.3f against uniform",
             min_agree, Mean(agreement), student, ci.mean, ci.half_width));
}

// Plays the component of the opponent actually faced; the reference for
// oracle-classifier mixing under a mixture.
class DispatchAgent final : public qlearn::Agent {
 public:
  explicit DispatchAgent(std::shared_ptr<const ComponentSet> comps)
      : comps_(std::move(comps)) {}
  int Act(const Observation& obs,
          const qlearn::EpisodeContext& context) const override {
    return qlearn::GreedyAction(comps_->q(context.opponent).Values(obs));
  }

 private:
  std::shared_ptr<const ComponentSet> comps_;
};

void OpponentClassifier() {
  Timer timer;
  envs::SoccerGame game;
  const std::vector<std::string> ids{"random", "chaser", "camper"};
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(game, ids);
  std::vector<std::shared_ptr<const QFunction>> qs;
  std::vector<ReplayBuffer> buffers;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto r = qlearn::TrainBestResponse(
        game, pool, MixedStrategy::PointMass(ids, static_cast<int>(k)),
        TabularConfig(60000, DeriveSeed(kSeed, {11, k})));
    qs.push_back(std::make_shared<QFunction>(std::move(r.q)));
    buffers.push_back(std::move(r.buffer));
  }
  std::vector<const ReplayBuffer*> views;
  for (const ReplayBuffer& b : buffers) views.push_back(&b);
  const opc::LabeledDataset ds =
      opc::BuildDataset(views, ids, DeriveSeed(kSeed, {12}));
  opc::ClassifierConfig cc;
  cc.seed = DeriveSeed(kSeed, {13});
  const opc::ClassifierTraining trained = opc::TrainClassifier(ds, cc);
  const double accuracy = opc::ValidationAccuracy(trained.classifier, ds);
  const double threshold =
      std::max(0.6, 1.0 / static_cast<double>(ids.size()) + 0.2);

  auto comps = std::make_shared<ComponentSet>(ids, qs);
  const qmix::QMixBeliefAgent oracle(
      comps, MixedStrategy::Uniform(ids),
      std::make_shared<qmix::TrueLabelEvidence>(ids));
  bool identical = true;
  for (int t = 0; t <= static_cast<int>(ids.size()); ++t) {
    const bool pure = t < static_cast<int>(ids.size());
    const MixedStrategy sigma =
        pure ? MixedStrategy::PointMass(ids, t) : MixedStrategy::Uniform(ids);
    const uint64_t seed = DeriveSeed(kSeed, {14, static_cast<uint64_t>(t)});
    const auto mixed = qlearn::EvaluateAgent(game, oracle, pool, sigma, 200, seed);
    std::unique_ptr<qlearn::Agent> reference;
    if (pure) {
      reference = std::make_unique<qlearn::GreedyQAgent>(comps->shared(t));
    } else {
      reference = std::make_unique<DispatchAgent>(comps);
    }
    const auto direct = qlearn::EvaluateAgent(game, *reference, pool, sigma, 200, seed);
    identical = identical && mixed.returns == direct.returns;
  }
  Report(7, accuracy >= threshold && identical, timer.Seconds(), 1200.0,
         Fmt("classifier validation accuracy %.3f (threshold %.2f, %zu points, "
             "best epoch %d); oracle-classifier returns %s component returns",
             accuracy, threshold, ds.size(), trained.best_epoch + 1,
             identical ? "equal" : "differ from"));
}

void ClosedForms() {
  Timer timer;
  const std::vector<double> t{1.0, 0.0}, s{0.0, 1.0};
  const double kl = distill::DistillLoss(t, s, 1.0);
  const double kl_expected = (std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0);
  const eval::ConfidenceInterval ci =
      eval::MakeConfidenceInterval({1.0, 2.0, 3.0, 4.0, 5.0});
  const double hw_expected = 2.776 * std::sqrt(2.5) / std::sqrt(5.0);
  const std::size_t n3 =
      eval::EnumerateMixtures({"a", "b", "c"}, 0.1).size();
  const std::size_t n5 =
      eval::EnumerateMixtures({"a", "b", "c", "d", "e"}, 0.1).size();
  const bool ok = std::fabs(kl - kl_expected) <= 1e-12 &&
                  std::fabs(ci.half_width - hw_expected) <= 1e-9 && n3 == 66 &&
                  n5 == 1001;
  Report(8, ok, timer.Seconds(), 10.0,
         Fmt("KL %.15f (want %.15f), CI half-width %.12f (want %.12f), grid "
             "sizes %zu and %zu",
             kl, kl_expected, ci.half_width, hw_expected, n3, n5));
}

bool SameOutcome(const envs::SoccerOutcome& a, const envs::SoccerOutcome& b) {
  return a.next == b.next && a.rewards == b.rewards && a.terminal == b.terminal &&
         a.scorer == b.scorer;
}

std::string SoccerInvariants() {
  Rng rng(DeriveSeed(kSeed, {15}));
  int episode = 0;
  envs::SoccerState state = envs::SoccerReset(DeriveSeed(kSeed, {16, 0}));
  int64_t violations = 0;
  for (int64_t step = 0; step < 1000000; ++step) {
    if (state.terminal) {
      state = envs::SoccerReset(
          DeriveSeed(kSeed, {16, static_cast<uint64_t>(++episode)}));
    }
    const std::array<int, 2> actions{UniformInt(rng, envs::kSoccerActions),
                                     UniformInt(rng, envs::kSoccerActions)};
    Rng replay = rng;
    const envs::SoccerOutcome out = envs::SoccerStep(state, actions, rng);
    const envs::SoccerOutcome again = envs::SoccerStep(state, actions, replay);
    bool ok = SameOutcome(out, again) && rng == replay;
    ok = ok && out.rewards[0] + out.rewards[1] == 0.0;
    ok = ok && (out.scorer >= 0) == (out.rewards[0] != 0.0);
    ok = ok && (out.scorer < 0 || (out.terminal && std::fabs(out.rewards[0]) == 1.0));
    // Exactly one ball: on the ground or held, never lost by a carrier
    // except into a goal.
    ok = ok && envs::SoccerStateValid(out.next);
    if (state.holder != envs::BallHolder::kGround && out.scorer < 0) {
      ok = ok && out.next.holder != envs::BallHolder::kGround;
    }
    violations += !ok;
    state = out.next;
  }
  return violations == 0 ? "" : Fmt("soccer: %lld violations", static_cast<long long>(violations));
}

std::string CommonsInvariants() {
  const envs::CommonsMap& map = envs::DefaultCommonsMap();
  const envs::CommonsConfig config;
  Rng rng(DeriveSeed(kSeed, {17}));
  int episode = 0;
  envs::CommonsState state = envs::CommonsReset(DeriveSeed(kSeed, {18, 0}), map);
  int64_t violations = 0;
  int64_t tags = 0;
  for (int64_t step = 0; step < 100000; ++step) {
    if (state.terminal) {
      state = envs::CommonsReset(
          DeriveSeed(kSeed, {18, static_cast<uint64_t>(++episode)}), map);
    }
    // Bias toward tagging so tag-outs are frequent.
    std::array<int, 2> actions;
    for (int& a : actions) {
      a = Uniform01(rng) < 0.3 ? envs::kTag : UniformInt(rng, envs::kCommonsActions);
    }
    Rng replay = rng;
    const envs::CommonsOutcome out = envs::CommonsStep(state, actions, rng, config);
    const envs::CommonsOutcome again = envs::CommonsStep(state, actions, replay, config);
    const envs::CommonsState& next = out.next;
    bool ok = next == again.next && out.rewards == again.rewards && rng == replay;
    ok = ok && next.AppleCount() == state.AppleCount() - out.apples_picked[0] -
                                        out.apples_picked[1] + out.regrown;
    for (int p = 0; p < 2; ++p) {
      const envs::CommonsPlayer& before = state.players[p];
      const envs::CommonsPlayer& after = next.players[p];
      ok = ok && out.rewards[p] == out.apples_picked[p];
      ok = ok && (before.present || out.apples_picked[p] == 0);
      ok = ok && after.countdown >= 0 && after.countdown <= config.tag_duration;
      ok = ok && (!after.present || after.countdown == 0);
      if (out.tagged[p]) {
        ++tags;
        ok = ok && before.present && !after.present &&
             after.countdown == config.tag_duration;
      } else if (!before.present) {
        const int left = std::max(before.countdown - 1, 0);
        if (left > 0) {
          ok = ok && !after.present && after.countdown == left;
        } else {
          const envs::CommonsPlayer& other = next.players[1 - p];
          const bool blocked = other.present && other.pos == next.spawns[p];
          ok = ok && (blocked ? !after.present && after.countdown == 1
                              : after.present && after.pos == next.spawns[p]);
        }
      } else {
        ok = ok && after.present;
      }
      if (after.present) {
        ok = ok && next.at(after.pos.row, after.pos.col) == envs::Tile::kEmpty;
      }
    }
    if (next.players[0].present && next.players[1].present) {
      ok = ok && next.players[0].pos != next.players[1].pos;
    }
    violations += !ok;
    state = next;
  }
  if (tags == 0) return "commons: no tag-outs exercised";
  return violations == 0 ? "" : Fmt("commons: %lld violations", static_cast<long long>(violations));
}

void EnvironmentInvariants() {
  Timer timer;
  const std::string soccer = SoccerInvariants();
  const std::string commons = CommonsInvariants();
  const bool ok = soccer.empty() && commons.empty();
  Report(9, ok, timer.Seconds(), 120.0,
         ok ? "1e6 soccer steps and 1e5 commons steps, all invariants hold"
            : soccer + " " + commons);
}

}  // namespace
}  // namespace qmixlab

// --expect-fail=4,6 lists criteria whose failure is known and analyzed; the
// run still prints them as FAIL but exits 0 when nothing else fails.
int main(int argc, char** argv) {
  using namespace qmixlab;
  std::vector<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const std::string flag = "--expect-fail=";
    if (arg.rfind(flag, 0) != 0) {
      std::fprintf(stderr, "usage: acceptance [--expect-fail=N,M,...]\n");
      return 2;
    }
    std::size_t pos = flag.size();
    while (pos < arg.size()) {
      std::size_t used = 0;
      expected.push_back(std::stoi(arg.substr(pos), &used));
      pos += used + 1;
    }
  }
  PriorMixingExactness();
  ClosedForms();
  GradientChecks();
  EnvironmentInvariants();

  // Criteria 2 and 4 share the tabular runs.
  {
    Timer timer;
    envs::SoccerGame game;
    const std::vector<std::string> ids{"chaser", "camper", "interceptor"};
    const envs::OpponentPool pool = qlearn::MakeOpponentPool(game, ids);
    std::vector<TabularRun> runs(5);
    ParallelFor(runs.size(), [&](std::size_t s) {
      runs[s] = TrainTabularRun(game, pool, 3000000, DeriveSeed(kSeed, {19, s}));
    });
    const double training = timer.Seconds();
    PointMassIdentity(runs.front());
    Coverage(runs, game, pool, training);
  }
  QmviBestResponds();
  OpponentClassifier();
  Distillation();
  bool unexpected = false;
  std::string list;
  for (int id : failed) {
    const bool known =
        std::find(expected.begin(), expected.end(), id) != expected.end();
    unexpected = unexpected || !known;
    list += Fmt(" %d%s", id, known ? " (expected)" : "");
  }
  std::printf("%zu of 9 criteria failed:%s\n", failed.size(),
              failed.empty() ? " none" : list.c_str());
  return unexpected ? 1 : 0;
}
