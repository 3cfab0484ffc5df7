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

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "qmixlab/common/error.h"
#include "qmixlab/distill/distill.h"
#include "qmixlab/envs/soccer.h"
#include "qmixlab/qlearn/opponents.h"
#include "qmixlab/qmix/mixing.h"

namespace qmixlab::distill {
namespace {

using qlearn::QFunction;
using qlearn::ReplayBuffer;

double Entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

TEST(SoftmaxTemperatureTest, ClosedForms) {
  const std::vector<double> equal{0.3, 0.3, 0.3};
  for (double p : SoftmaxTemperature(equal, 0.7)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
  const std::vector<double> q{1.0, 0.0};
  const std::vector<double> p = SoftmaxTemperature(q, 1.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p[1], 1.0 / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p[0], 0.73106, 1e-5);
}

TEST(SoftmaxTemperatureTest, EntropyGrowsWithTemperature) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> q(2 + UniformInt(rng, 8));
    for (double& x : q) x = 4.0 * Uniform01(rng) - 2.0;
    const double h01 = Entropy(SoftmaxTemperature(q, 0.1));
    const double h1 = Entropy(SoftmaxTemperature(q, 1.0));
    const double h10 = Entropy(SoftmaxTemperature(q, 10.0));
    EXPECT_LE(h01, h1 + 1e-12);
    EXPECT_LE(h1, h10 + 1e-12);
  }
}

TEST(SoftmaxTemperatureTest, StableForLargeValues) {
  const std::vector<double> q{1000.0, 999.0};
  const std::vector<double> p = SoftmaxTemperature(q, 1.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-12);
}

TEST(SoftmaxTemperatureTest, RejectsBadInput) {
  const std::vector<double> q{1.0, 0.0};
  EXPECT_THROW(SoftmaxTemperature(q, 0.0), InvalidArgument);
  EXPECT_THROW(SoftmaxTemperature(q, -1.0), InvalidArgument);
  const std::vector<double> inf{1.0, INFINITY};
  EXPECT_THROW(SoftmaxTemperature(inf, 1.0), InvalidArgument);
}

TEST(DistillLossTest, ClosedForms) {
  const std::vector<double> t{1.0, 0.0}, s{0.0, 1.0};
  const double e = std::exp(1.0);
  EXPECT_NEAR(DistillLoss(t, s, 1.0), (e - 1.0) / (e + 1.0), 1e-12);
  EXPECT_NEAR(DistillLoss(t, s, 1.0), 0.462117, 1e-6);
  EXPECT_LT(DistillLoss(t, s, 10.0), DistillLoss(t, s, 1.0));
  EXPECT_EQ(DistillLoss(t, t, 1.0), 0.0);
}

TEST(DistillLossTest, NonNegativeZeroOnlyWhenEqualAndShiftInvariant) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(UniformInt(rng, 6));
    std::vector<double> t(n), s(n);
    for (double& x : t) x = 4.0 * Uniform01(rng) - 2.0;
    for (double& x : s) x = 4.0 * Uniform01(rng) - 2.0;
    const double tau = 0.2 + 3.0 * Uniform01(rng);
    const double loss = DistillLoss(t, s, tau);
    EXPECT_GT(loss, 0.0);
    std::vector<double> shifted = t;
    const double c = 10.0 * Uniform01(rng) - 5.0;
    for (double& x : shifted) x += c;
    EXPECT_NEAR(DistillLoss(shifted, s, tau), loss, 1e-12);
    // A student equal to the teacher up to a shift has the same softmax.
    EXPECT_NEAR(DistillLoss(t, shifted, tau), 0.0, 1e-12);
  }
}

TEST(DistillLossTest, LengthMismatchIsAnError) {
  const std::vector<double> a{1.0, 0.0}, b{1.0};
  EXPECT_THROW(DistillLoss(a, b, 1.0), InvalidArgument);
  EXPECT_THROW(DistillLoss(a, a, 0.0), InvalidArgument);
}

TEST(DistillLossTest, GradientMatchesCentralDifferences) {
  Rng rng(3);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(UniformInt(rng, 8));
    std::vector<double> t(n), s(n), g(n);
    for (double& x : t) x = 4.0 * Uniform01(rng) - 2.0;
    for (double& x : s) x = 4.0 * Uniform01(rng) - 2.0;
    const double tau = 0.3 + 3.0 * Uniform01(rng);
    DistillLossGradient(t, s, tau, g);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> up = s, down = s;
      up[a] += h;
      down[a] -= h;
      const double fd = (DistillLoss(t, up, tau) - DistillLoss(t, down, tau)) /
                        (2.0 * h);
      const double scale = std::max({std::abs(fd), std::abs(g[a]), 1e-3});
      EXPECT_LE(std::abs(fd - g[a]) / scale, 1e-4)
          << "trial " << trial << " a=" << a << " fd=" << fd << " g=" << g[a];
    }
  }
}

// Observations from random-vs-random soccer play.
ReplayBuffer SoccerObservations(int n, uint64_t seed) {
  envs::SoccerGame game;
  ReplayBuffer buffer(static_cast<std::size_t>(n));
  Rng rng(seed);
  envs::UniformRandomPolicy random(envs::kSoccerActions);
  int episode = 0;
  game.Reset(DeriveSeed(seed, {static_cast<uint64_t>(episode)}));
  while (static_cast<int>(buffer.size()) < n) {
    if (game.terminal()) {
      game.Reset(DeriveSeed(seed, {static_cast<uint64_t>(++episode)}));
    }
    qlearn::Transition t;
    t.obs = game.Observe(0);
    t.action = random.Act(t.obs, rng);
    game.Step(t.action, random.Act(game.Observe(1), rng), rng);
    buffer.Add(t);
  }
  return buffer;
}

TEST(TrainStudentTest, ZeroEpochsReturnsTheInitialStudent) {
  const ReplayBuffer buffer = SoccerObservations(200, 4);
  Rng rng(5);
  auto q = std::make_shared<QFunction>(
      QFunction::RandomMlp(buffer[0].obs.size, 5, {50, 50}, rng));
  auto comps = std::make_shared<qmix::ComponentSet>(
      std::vector<std::string>{"only"},
      std::vector<std::shared_ptr<const QFunction>>{q});
  DistillConfig config;
  config.epochs = 0;
  config.seed = 6;
  const DistillResult r =
      TrainStudent(PriorTeacher(comps, qmix::MixedStrategy::Uniform({"only"})),
                   5, {&buffer}, config);
  EXPECT_EQ(r.student, InitialStudent(buffer[0].obs.size, 5, config));
  EXPECT_TRUE(r.train_loss.empty());
}

TEST(TrainStudentTest, SingleComponentIsRealizable) {
  const ReplayBuffer buffer = SoccerObservations(6000, 7);
  Rng rng(8);
  auto q = std::make_shared<QFunction>(
      QFunction::RandomMlp(buffer[0].obs.size, 5, {50, 50}, rng));
  auto comps = std::make_shared<qmix::ComponentSet>(
      std::vector<std::string>{"only"},
      std::vector<std::shared_ptr<const QFunction>>{q});
  const Teacher teacher =
      PriorTeacher(comps, qmix::MixedStrategy::Uniform({"only"}));
  DistillConfig config;
  config.seed = 9;
  int calls = 0;
  const DistillResult r = TrainStudent(
      teacher, 5, {&buffer}, config, [&calls](const QFunction&) {
        return static_cast<double>(calls++);
      });
  EXPECT_EQ(r.train_points + r.held_out_points, buffer.size());
  EXPECT_EQ(r.held_out_points, 600u);
  EXPECT_GE(r.held_out_agreement, 0.99);
  EXPECT_LT(r.train_loss.back(), r.train_loss.front());
  ASSERT_EQ(r.curve.size(), static_cast<std::size_t>(config.epochs + 1));
  EXPECT_EQ(r.curve.front().epoch, 0);
  EXPECT_EQ(r.curve.back().epoch, config.epochs);
  // One component's worth of parameters.
  EXPECT_EQ(r.student.net().num_parameters(), q->net().num_parameters());
}

TEST(TrainStudentTest, EmptyBuffersAreAnError) {
  const ReplayBuffer empty(4);
  const Teacher t = [](const envs::Observation&) {
    return std::vector<double>{0.0, 0.0};
  };
  EXPECT_THROW(TrainStudent(t, 2, {&empty}, DistillConfig{}), InvalidArgument);
  DistillConfig bad;
  bad.temperature = 0.0;
  const ReplayBuffer one = SoccerObservations(1, 1);
  EXPECT_THROW(TrainStudent(t, 2, {&one}, bad), InvalidArgument);
}

TEST(TrainStudentTest, DefaultsMatchTheReferenceSettings) {
  const DistillConfig c;
  EXPECT_EQ(c.learning_rate, 0.003);
  EXPECT_EQ(c.batch_size, 64);
  EXPECT_EQ(c.temperature, 1.0);
  EXPECT_EQ(c.epochs, 10);
}

}  // namespace
}  // namespace qmixlab::distill
