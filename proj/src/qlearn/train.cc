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

#include "qmixlab/qlearn/train.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <string>

#include "qmixlab/common/error.h"
#include "qmixlab/qlearn/adam.h"
#include "qmixlab/qlearn/mlp.h"

namespace qmixlab::qlearn {
namespace {

void CheckPool(const envs::OpponentPool& pool,
               const qmix::MixedStrategy& sigma) {
  if (pool.ids.size() != pool.policies.size()) {
    throw InvalidArgument("opponent pool: ids and policies differ in length");
  }
  if (pool.ids != sigma.ids()) {
    throw InvalidArgument("mixture ids do not match the opponent pool");
  }
  for (const auto& p : pool.policies) {
    if (!p) throw InvalidArgument("opponent pool: missing policy");
  }
}

}  // namespace

TrainConfig TrainConfig::SoccerDefaults() { return TrainConfig{}; }

TrainConfig TrainConfig::CommonsDefaults() {
  TrainConfig c;
  c.timesteps = 500000;
  c.learning_rate = 3e-4;
  c.buffer_capacity = 30000;
  c.batch_size = 64;
  c.gamma = 0.99;
  c.exploration_fraction = 0.3;
  c.final_epsilon = 0.03;
  c.train_frequency = 1;
  c.training_starts = 1000;
  return c;
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw InvalidArgument("train config: " + what);
  };
  if (timesteps < 0) fail("timesteps must be >= 0");
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (buffer_capacity < 1) fail("buffer_capacity must be >= 1");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(exploration_fraction > 0.0 && exploration_fraction <= 1.0)) {
    fail("exploration_fraction must be in (0, 1]");
  }
  if (!(final_epsilon >= 0.0 && final_epsilon <= 1.0)) {
    fail("final_epsilon must be in [0, 1]");
  }
  if (train_frequency < 1) fail("train_frequency must be >= 1");
  if (training_starts < 0) fail("training_starts must be >= 0");
  if (target_sync_interval < 1) fail("target_sync_interval must be >= 1");
  if (!(tabular_learning_rate > 0.0 && tabular_learning_rate <= 1.0)) {
    fail("tabular_learning_rate must be in (0, 1]");
  }
  for (int h : hidden) {
    if (h < 1) fail("hidden layer sizes must be >= 1");
  }
}

double EpsilonAt(int64_t t, const TrainConfig& config) {
  if (t < 0) throw InvalidArgument("epsilon: t must be >= 0");
  if (t == 0) return 1.0;
  const double horizon =
      config.exploration_fraction * static_cast<double>(config.timesteps);
  if (static_cast<double>(t) >= horizon) return config.final_epsilon;
  const double frac = static_cast<double>(t) / horizon;
  return 1.0 + frac * (config.final_epsilon - 1.0);
}

std::vector<double> DoubleDqnTargets(std::span<const Transition* const> batch,
                                     const QFunction& online,
                                     const QFunction& target, double gamma) {
  if (batch.empty()) throw InvalidArgument("double dqn: empty batch");
  std::vector<double> y(batch.size());
  std::vector<double> q_online(static_cast<std::size_t>(online.num_actions()));
  std::vector<double> q_target(static_cast<std::size_t>(target.num_actions()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& tr = *batch[i];
    y[i] = tr.reward;
    if (tr.terminal) continue;
    online.Values(tr.next_obs, q_online);
    target.Values(tr.next_obs, q_target);
    y[i] += gamma * q_target[static_cast<std::size_t>(GreedyAction(q_online))];
  }
  return y;
}

TrainResult TrainBestResponse(const envs::Environment& env,
                              const envs::OpponentPool& pool,
                              const qmix::MixedStrategy& sigma,
                              const TrainConfig& config,
                              const TrainCheckpoint& checkpoint) {
  config.Validate();
  CheckPool(pool, sigma);
  if (checkpoint.fn && checkpoint.interval <= 0) {
    throw InvalidArgument("train: checkpoint interval must be positive");
  }

  const uint64_t seed = config.seed;
  Rng init_rng(DeriveSeed(seed, {0}));
  Rng explore_rng(DeriveSeed(seed, {1}));
  Rng draw_rng(DeriveSeed(seed, {2}));
  Rng dynamics_rng(DeriveSeed(seed, {3}));
  Rng opponent_rng(DeriveSeed(seed, {4}));
  Rng batch_rng(DeriveSeed(seed, {5}));

  const int num_actions = env.num_actions();
  TrainResult result;
  result.q = config.variant == QVariant::kTabular
                 ? QFunction::Tabular(env.observation_size(), num_actions)
                 : QFunction::RandomMlp(env.observation_size(), num_actions,
                                        config.hidden, init_rng);
  result.buffer = ReplayBuffer(static_cast<std::size_t>(config.buffer_capacity));
  if (checkpoint.fn) checkpoint.fn(0, result.q);
  if (config.timesteps == 0) return result;

  QFunction& q = result.q;
  const bool tabular = config.variant == QVariant::kTabular;
  QFunction target = q;
  std::unique_ptr<AdamOptimizer> adam;
  std::vector<double> grad;
  if (!tabular) {
    adam = std::make_unique<AdamOptimizer>(
        q.net().num_parameters(),
        AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});
    grad.assign(q.net().num_parameters(), 0.0);
  }
  std::unordered_map<uint64_t, std::vector<int64_t>> visits;

  std::unique_ptr<envs::Environment> game = env.Clone();
  std::vector<double> values(static_cast<std::size_t>(num_actions));
  std::vector<const Transition*> batch;
  std::vector<MlpInput> inputs;
  std::vector<int> actions;

  int opponent = -1;
  int64_t episode = 0;
  double episode_return = 0.0;
  bool need_reset = true;
  envs::Observation obs;

  for (int64_t t = 0; t < config.timesteps; ++t) {
    if (need_reset) {
      opponent = qmix::SampleOpponent(sigma, draw_rng);
      game->Reset(DeriveSeed(seed, {6, static_cast<uint64_t>(episode)}));
      obs = game->Observe(0);
      episode_return = 0.0;
      need_reset = false;
    }
    int action;
    if (Uniform01(explore_rng) < EpsilonAt(t, config)) {
      action = UniformInt(explore_rng, num_actions);
    } else {
      q.Values(obs, values);
      action = GreedyAction(values);
    }
    const int opponent_action =
        pool.policies[static_cast<std::size_t>(opponent)]->Act(
            game->Observe(1), opponent_rng);
    const envs::StepResult step = game->Step(action, opponent_action,
                                             dynamics_rng);
    envs::Observation next = game->Observe(0);
    episode_return += step.rewards[0];

    if (tabular) {
      std::vector<double>& row = q.Row(obs.key);
      double bootstrap = 0.0;
      if (!step.terminal) {
        q.Values(next, values);
        bootstrap = *std::max_element(values.begin(), values.end());
      }
      double alpha = config.tabular_learning_rate;
      if (config.tabular_schedule == TabularSchedule::kInverseVisits) {
        auto& n = visits[obs.key];
        if (n.empty()) n.assign(static_cast<std::size_t>(num_actions), 0);
        alpha = 1.0 / static_cast<double>(++n[static_cast<std::size_t>(action)]);
      }
      double& qa = row[static_cast<std::size_t>(action)];
      qa += alpha * (step.rewards[0] + config.gamma * bootstrap - qa);
    }

    result.buffer.Add(Transition{obs, action, step.rewards[0], next,
                                 step.terminal, opponent});

    if (!tabular && t >= config.training_starts &&
        t % config.train_frequency == 0) {
      const std::vector<std::size_t> idx = result.buffer.SampleIndices(
          static_cast<std::size_t>(config.batch_size), batch_rng);
      batch.clear();
      inputs.clear();
      actions.clear();
      for (std::size_t i : idx) {
        const Transition& tr = result.buffer[i];
        batch.push_back(&tr);
        inputs.emplace_back(tr.obs);
        actions.push_back(tr.action);
      }
      const std::vector<double> y =
          DoubleDqnTargets(batch, q, target, config.gamma);
      TdLossGradient(q.net(), inputs, actions, y, grad);
      adam->Step(q.net().parameters(), grad);
    }
    if (!tabular && (t + 1) % config.target_sync_interval == 0) target = q;
    if (checkpoint.fn && (t + 1) % checkpoint.interval == 0) {
      checkpoint.fn(t + 1, q);
    }

    if (step.terminal) {
      result.episode_returns.push_back(episode_return);
      ++episode;
      need_reset = true;
    } else {
      obs = std::move(next);
    }
  }
  return result;
}

EpisodeSeeds EvalEpisodeSeeds(uint64_t seed, int episode) {
  const uint64_t base = DeriveSeed(seed, {static_cast<uint64_t>(episode)});
  return EpisodeSeeds{DeriveSeed(base, {0}), DeriveSeed(base, {1}),
                      DeriveSeed(base, {2}), DeriveSeed(base, {3})};
}

double PlayEpisode(envs::Environment& env, const Agent& agent,
                   const envs::Policy& opponent, int opponent_index,
                   const EpisodeSeeds& seeds) {
  Rng dynamics_rng(seeds.dynamics);
  Rng opponent_rng(seeds.opponent_actions);
  env.Reset(seeds.reset);
  const EpisodeContext context{opponent_index};
  double total = 0.0;
  while (!env.terminal()) {
    const int a = agent.Act(env.Observe(0), context);
    const int b = opponent.Act(env.Observe(1), opponent_rng);
    total += env.Step(a, b, dynamics_rng).rewards[0];
  }
  return total;
}

EvalResult EvaluateAgent(const envs::Environment& env, const Agent& agent,
                         const envs::OpponentPool& pool,
                         const qmix::MixedStrategy& sigma, int episodes,
                         uint64_t seed) {
  if (episodes < 1) throw InvalidArgument("evaluate: episodes must be >= 1");
  CheckPool(pool, sigma);
  std::unique_ptr<envs::Environment> game = env.Clone();
  EvalResult result;
  result.returns.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    const EpisodeSeeds seeds = EvalEpisodeSeeds(seed, e);
    Rng draw_rng(seeds.opponent_draw);
    const int k = qmix::SampleOpponent(sigma, draw_rng);
    result.opponents.push_back(k);
    result.returns.push_back(PlayEpisode(
        *game, agent, *pool.policies[static_cast<std::size_t>(k)], k, seeds));
  }
  double sum = 0.0;
  for (double r : result.returns) sum += r;
  result.mean = sum / static_cast<double>(episodes);
  return result;
}

}  // namespace qmixlab::qlearn
