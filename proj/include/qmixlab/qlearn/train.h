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

#ifndef QMIXLAB_QLEARN_TRAIN_H_
#define QMIXLAB_QLEARN_TRAIN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/envs/policy.h"
#include "qmixlab/qlearn/agent.h"
#include "qmixlab/qlearn/qfunction.h"
#include "qmixlab/qlearn/replay_buffer.h"
#include "qmixlab/qmix/mixed_strategy.h"

namespace qmixlab::qlearn {

enum class TabularSchedule { kConstant, kInverseVisits };

struct TrainConfig {
  int64_t timesteps = 300000;
  double learning_rate = 3e-4;
  int buffer_capacity = 3000;
  int batch_size = 64;
  double gamma = 0.99;
  double exploration_fraction = 0.33;
  double final_epsilon = 0.01;
  int train_frequency = 1;
  int training_starts = 300;
  int target_sync_interval = 500;
  uint64_t seed = 0;

  QVariant variant = QVariant::kMlp;
  std::vector<int> hidden = {50, 50};
  // Step size of tabular Q-learning; learning_rate is an Adam step size.
  double tabular_learning_rate = 0.1;
  TabularSchedule tabular_schedule = TabularSchedule::kConstant;

  static TrainConfig SoccerDefaults();
  static TrainConfig CommonsDefaults();

  // Throws InvalidArgument naming the offending field.
  void Validate() const;
};

// Linear decay from 1 at t = 0 to final_epsilon at
// t = exploration_fraction * timesteps, constant afterwards.
double EpsilonAt(int64_t t, const TrainConfig& config);

// y = r for terminal transitions, else
// r + gamma * Q_target(o', argmax_a Q_online(o', a)).
std::vector<double> DoubleDqnTargets(std::span<const Transition* const> batch,
                                     const QFunction& online,
                                     const QFunction& target, double gamma);

struct TrainResult {
  QFunction q;
  ReplayBuffer buffer;
  std::vector<double> episode_returns;  // completed training episodes
};

// Called with the step count and current Q-function at step 0 and after
// every `interval` steps; used to trace learning curves.
struct TrainCheckpoint {
  int64_t interval = 5000;
  std::function<void(int64_t, const QFunction&)> fn;
};

// Epsilon-greedy best-response training against an opponent drawn from
// sigma at every episode start (sigma.ids() must equal pool.ids). Uses
// Double DQN for MLP Q-functions and one-step Q-learning for tables.
// Validation happens before any simulation.
TrainResult TrainBestResponse(const envs::Environment& env,
                              const envs::OpponentPool& pool,
                              const qmix::MixedStrategy& sigma,
                              const TrainConfig& config,
                              const TrainCheckpoint& checkpoint = {});

struct EvalResult {
  double mean = 0.0;
  std::vector<double> returns;
  std::vector<int> opponents;  // sampled opponent per episode
};

// Per-episode random streams of an evaluation. The opponent draw has its own
// stream so a point-mass mixture replays the pure-opponent episodes exactly.
struct EpisodeSeeds {
  uint64_t opponent_draw;
  uint64_t reset;
  uint64_t dynamics;
  uint64_t opponent_actions;
};
EpisodeSeeds EvalEpisodeSeeds(uint64_t seed, int episode);

// Plays one episode; returns the learner's undiscounted return.
double PlayEpisode(envs::Environment& env, const Agent& agent,
                   const envs::Policy& opponent, int opponent_index,
                   const EpisodeSeeds& seeds);

// Greedy evaluation for `episodes` episodes against opponents drawn from
// sigma per episode.
EvalResult EvaluateAgent(const envs::Environment& env, const Agent& agent,
                         const envs::OpponentPool& pool,
                         const qmix::MixedStrategy& sigma, int episodes,
                         uint64_t seed);

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_TRAIN_H_
