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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "gtest/gtest.h"
#include "qmixlab/common/error.h"
#include "qmixlab/common/io.h"
#include "qmixlab/envs/bandit.h"
#include "qmixlab/envs/soccer.h"
#include "qmixlab/eval/coverage.h"
#include "qmixlab/qlearn/opponents.h"
#include "qmixlab/qlearn/train.h"
#include "qmixlab/qmix/mixing.h"

namespace qmixlab::eval {
namespace {

std::vector<std::string> Ids(int k) {
  std::vector<std::string> ids;
  for (int i = 0; i < k; ++i) ids.push_back("o" + std::to_string(i));
  return ids;
}

TEST(MixtureGridTest, Counts) {
  EXPECT_EQ(EnumerateMixtures(Ids(3), 0.1).size(), 66u);
  EXPECT_EQ(EnumerateMixtures(Ids(5), 0.1).size(), 1001u);
  EXPECT_EQ(MixtureCount(3, 10), 66u);
  EXPECT_EQ(MixtureCount(5, 10), 1001u);
  for (int k = 1; k <= 4; ++k) {
    for (int units : {1, 2, 4, 5}) {
      EXPECT_EQ(EnumerateMixtures(Ids(k), 1.0 / units).size(),
                MixtureCount(k, units));
    }
  }
}

TEST(MixtureGridTest, SingleOpponent) {
  const MixtureGrid g = EnumerateMixtures(Ids(1));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].weights(), (std::vector<double>{1.0}));
}

TEST(MixtureGridTest, ElementsAreDistinctSimplexPointsOnTheStep) {
  const MixtureGrid g = EnumerateMixtures(Ids(4), 0.1);
  std::set<std::vector<long>> seen;
  std::vector<long> previous;
  for (const qmix::MixedStrategy& s : g) {
    double total = 0.0;
    std::vector<long> units;
    for (double w : s.weights()) {
      total += w;
      const double u = w * 10.0;
      EXPECT_NEAR(u, std::round(u), 1e-12);
      units.push_back(std::lround(u));
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_TRUE(seen.insert(units).second);
    if (!previous.empty()) {
      EXPECT_LT(previous, units);  // lexicographic
    }
    previous = units;
  }
  EXPECT_EQ(g.front().weights(), (std::vector<double>{0, 0, 0, 1}));
  EXPECT_EQ(g.back().weights(), (std::vector<double>{1, 0, 0, 0}));
}

TEST(MixtureGridTest, RejectsNonIntegralSteps) {
  EXPECT_THROW(EnumerateMixtures(Ids(3), 0.3), InvalidArgument);
  EXPECT_THROW(EnumerateMixtures(Ids(3), 0.0), InvalidArgument);
  EXPECT_THROW(EnumerateMixtures({}, 0.1), InvalidArgument);
}

TEST(ConfidenceIntervalTest, HandComputedExample) {
  const ConfidenceInterval ci = MakeConfidenceInterval({1, 2, 3, 4, 5});
  EXPECT_EQ(ci.n, 5);
  EXPECT_EQ(ci.t, 2.776);
  EXPECT_NEAR(ci.mean, 3.0, 1e-15);
  EXPECT_NEAR(ci.half_width, 2.776 * std::sqrt(2.5) / std::sqrt(5.0), 1e-9);
  EXPECT_NEAR(ci.half_width, 1.9630, 1e-4);
}

TEST(ConfidenceIntervalTest, IdenticalMeansAndErrors) {
  EXPECT_EQ(MakeConfidenceInterval({0.4, 0.4, 0.4}).half_width, 0.0);
  EXPECT_THROW(MakeConfidenceInterval({1.0}), InvalidArgument);
  EXPECT_THROW(MakeConfidenceInterval({}), InvalidArgument);
  EXPECT_EQ(MakeConfidenceInterval({0.0, 1.0}, 3.0).t, 3.0);
}

TEST(ConfidenceIntervalTest, TableMultipliers) {
  EXPECT_EQ(StudentT95(2), 12.706);
  EXPECT_EQ(StudentT95(5), 2.776);
  EXPECT_EQ(StudentT95(11), 2.228);
  EXPECT_EQ(StudentT95(31), 2.042);
}

// A bandit where opponent k pays 1 for arm k; a fixed-arm agent's expected
// return against mixture sigma is sigma(arm).
class FixedArm final : public qlearn::Agent {
 public:
  explicit FixedArm(int arm) : arm_(arm) {}
  int Act(const envs::Observation&, const qlearn::EpisodeContext&) const override {
    return arm_;
  }

 private:
  int arm_;
};

struct BanditFixture {
  envs::BanditGame game{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  envs::OpponentPool pool =
      qlearn::MakeOpponentPool(game, {"fixed:0", "fixed:1", "fixed:2"});
  std::vector<SweepMethod> methods{
      {"arm0", {std::make_shared<FixedArm>(0)}, {}},
      {"arm2", {std::make_shared<FixedArm>(2)}, {}}};
};

TEST(CoverageSweepTest, PointMassRowsEqualPureEvaluation) {
  BanditFixture f;
  const MixtureGrid grid = EnumerateMixtures(f.pool.ids, 0.5);
  SweepConfig config;
  config.episodes = 40;
  config.seeds = {3, 4};
  const CoverageReport r = CoverageSweep(f.game, f.methods, f.pool, grid, config);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int k = 0; k < 3; ++k) {
      if (grid[j].weight(k) != 1.0) continue;
      for (std::size_t m = 0; m < f.methods.size(); ++m) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
          const auto pure = qlearn::EvaluateAgent(
              f.game, *f.methods[m].agents[0], f.pool,
              qmix::MixedStrategy::PointMass(f.pool.ids, k), config.episodes,
              SweepTaskSeed(config.seeds[s], static_cast<int>(j)));
          EXPECT_EQ(r.cells[m][j].seed_means[s], pure.mean);
        }
      }
    }
  }
}

TEST(CoverageSweepTest, MeansTrackTheMixtureAndStayInBounds) {
  BanditFixture f;
  const MixtureGrid grid = EnumerateMixtures(f.pool.ids, 0.25);
  SweepConfig config;
  config.episodes = 400;
  config.seeds = {0, 1, 2};
  const CoverageReport r = CoverageSweep(f.game, f.methods, f.pool, grid, config);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double p = grid[j].weight(0);
    for (double x : r.cells[0][j].seed_means) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    // Mean of 1200 Bernoulli(p) draws: five standard errors.
    EXPECT_NEAR(r.cells[0][j].mean, p, 5.0 * std::sqrt(p * (1 - p) / 1200) + 1e-12);
  }
}

TEST(CoverageSweepTest, FactoryBuildsAnAgentPerMixture) {
  BanditFixture f;
  const MixtureGrid grid = EnumerateMixtures(f.pool.ids, 0.5);
  SweepConfig config;
  config.episodes = 10;
  config.seeds = {1, 2};
  // Plays the most likely opponent's arm, which always pays 1 against a
  // point mass.
  SweepMethod best{"best", {}, [](std::size_t, const qmix::MixedStrategy& s) {
                     const auto& w = s.weights();
                     return std::make_shared<FixedArm>(static_cast<int>(
                         std::max_element(w.begin(), w.end()) - w.begin()));
                   }};
  const CoverageReport r = CoverageSweep(f.game, {best}, f.pool, grid, config);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto& w = grid[j].weights();
    if (*std::max_element(w.begin(), w.end()) != 1.0) continue;
    EXPECT_EQ(r.cells[0][j].mean, 1.0);
  }
}

TEST(CoverageSweepTest, ResultsDoNotDependOnMethodOrderOrThreads) {
  envs::SoccerGame game;
  const auto pool = qlearn::MakeOpponentPool(game, {"random", "chaser"});
  Rng rng(1);
  std::vector<std::shared_ptr<const qlearn::QFunction>> qs;
  for (int k = 0; k < 2; ++k) {
    qs.push_back(std::make_shared<qlearn::QFunction>(qlearn::QFunction::RandomMlp(
        game.observation_size(), game.num_actions(), {50, 50}, rng)));
  }
  SweepMethod a{"a", {std::make_shared<qlearn::GreedyQAgent>(qs[0])}, {}};
  SweepMethod b{"b", {std::make_shared<qlearn::GreedyQAgent>(qs[1])}, {}};
  const MixtureGrid grid = EnumerateMixtures(pool.ids, 0.25);
  SweepConfig one;
  one.episodes = 5;
  one.seeds = {7, 8};
  one.threads = 1;
  SweepConfig four = one;
  four.threads = 4;
  const CoverageReport ab = CoverageSweep(game, {a, b}, pool, grid, one);
  const CoverageReport ba = CoverageSweep(game, {b, a}, pool, grid, four);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_EQ(ab.cells[0][j].seed_means, ba.cells[1][j].seed_means);
    EXPECT_EQ(ab.cells[1][j].seed_means, ba.cells[0][j].seed_means);
    for (double x : ab.cells[0][j].seed_means) {
      EXPECT_GE(x, -1.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(CoverageSweepTest, MismatchedMethodFailsBeforeSimulating) {
  envs::SoccerGame game;
  const auto pool = qlearn::MakeOpponentPool(game, {"random", "chaser"});
  Rng rng(2);
  auto wrong = std::make_shared<qlearn::QFunction>(
      qlearn::QFunction::RandomMlp(7, game.num_actions(), {4}, rng));
  const std::vector<SweepMethod> methods{
      {"wrong", {std::make_shared<qlearn::GreedyQAgent>(wrong)}, {}}};
  EXPECT_THROW(CoverageSweep(game, methods, pool,
                             EnumerateMixtures(pool.ids, 0.5), SweepConfig{}),
               InvalidArgument);
  SweepConfig three;
  three.seeds = {1, 2, 3};
  const std::vector<SweepMethod> two_agents{
      {"x",
       {std::make_shared<qlearn::GreedyQAgent>(wrong),
        std::make_shared<qlearn::GreedyQAgent>(wrong)},
       {}}};
  EXPECT_THROW(CoverageSweep(game, two_agents, pool,
                             EnumerateMixtures(pool.ids, 0.5), three),
               InvalidArgument);
}

TEST(ReportTest, RoundTripAndSortedCurve) {
  BanditFixture f;
  const MixtureGrid grid = EnumerateMixtures(f.pool.ids, 0.25);
  SweepConfig config;
  config.episodes = 7;
  config.seeds = {0, 1, 2, 3, 4};
  const CoverageReport r = CoverageSweep(f.game, f.methods, f.pool, grid, config);

  const CoverageReport back = ParsePerSeedCsv(PerSeedCsv(r), f.pool.ids);
  EXPECT_EQ(back.methods, r.methods);
  EXPECT_EQ(back.seeds, r.seeds);
  ASSERT_EQ(back.grid.size(), grid.size());
  for (std::size_t m = 0; m < r.methods.size(); ++m) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      EXPECT_EQ(back.grid[j], grid[j]);
      EXPECT_NEAR(back.cells[m][j].mean, r.cells[m][j].mean,
                  1e-5 * (1.0 + std::abs(r.cells[m][j].mean)));
      EXPECT_NEAR(back.cells[m][j].half_width, r.cells[m][j].half_width,
                  1e-5 * (1.0 + r.cells[m][j].half_width));
    }
  }

  const std::vector<SortedRow> rows = ParseSortedCurveCsv(SortedCurveCsv(r));
  ASSERT_EQ(rows.size(), r.methods.size() * grid.size());
  for (std::size_t m = 0; m < r.methods.size(); ++m) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const SortedRow& row = rows[m * grid.size() + i];
      EXPECT_EQ(row.method, r.methods[m]);
      EXPECT_EQ(row.rank, static_cast<int>(i + 1));
      if (i > 0) {
        EXPECT_LE(row.aggregate_mean, rows[m * grid.size() + i - 1].aggregate_mean);
      }
    }
  }
  // Mixture literal parses back into the grid point it names.
  const std::vector<int> order = r.SortedOrder(0);
  EXPECT_EQ(qmix::MixedStrategy::Parse(rows[0].mixture, f.pool.ids),
            grid[static_cast<std::size_t>(order[0])]);
}

TEST(ReportTest, EmitWritesBothFilesAndRespectsForce) {
  BanditFixture f;
  SweepConfig config;
  config.episodes = 2;
  config.seeds = {0, 1};
  const CoverageReport r = CoverageSweep(
      f.game, f.methods, f.pool, EnumerateMixtures(f.pool.ids, 0.5), config);
  const std::string prefix =
      (std::filesystem::temp_directory_path() / "qmixlab_eval_test").string();
  std::filesystem::remove(prefix + "_per_seed.csv");
  std::filesystem::remove(prefix + "_sorted.csv");
  EmitReport(r, prefix, false);
  EXPECT_EQ(ReadFile(prefix + "_per_seed.csv"), PerSeedCsv(r));
  EXPECT_EQ(ReadFile(prefix + "_sorted.csv"), SortedCurveCsv(r));
  EXPECT_THROW(EmitReport(r, prefix, false), InvalidArgument);
  EmitReport(r, prefix, true);
  EXPECT_THROW(EmitReport(r, "/nonexistent/dir/report", true), MissingArtifact);
  std::filesystem::remove(prefix + "_per_seed.csv");
  std::filesystem::remove(prefix + "_sorted.csv");
}

TEST(ReportTest, MalformedInputIsRejected) {
  EXPECT_THROW(ParsePerSeedCsv("wrong,header\n", Ids(2)), CorruptDocument);
  EXPECT_THROW(ParsePerSeedCsv("method,mixture,seed,mean_return\na,\"1,0\",0\n",
                               Ids(2)),
               CorruptDocument);
  EXPECT_THROW(
      ParsePerSeedCsv("method,mixture,seed,mean_return\na,\"1,0\",0,zz\n", Ids(2)),
      CorruptDocument);
  EXPECT_THROW(
      ParsePerSeedCsv("method,mixture,seed,mean_return\na,\"0.5,0\",0,1\n", Ids(2)),
      CorruptDocument);
}

}  // namespace
}  // namespace qmixlab::eval
