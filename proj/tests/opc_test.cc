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
#include <filesystem>
#include <numeric>
#include <set>

#include "gtest/gtest.h"
#include "qmixlab/common/error.h"
#include "qmixlab/envs/soccer.h"
#include "qmixlab/opc/classifier.h"
#include "qmixlab/opc/dataset.h"
#include "qmixlab/qlearn/model_io.h"
#include "qmixlab/qlearn/opponents.h"
#include "qmixlab/qlearn/train.h"
#include "qmixlab/qmix/mixing.h"

namespace qmixlab::opc {
namespace {

using envs::Observation;
using qlearn::ReplayBuffer;
using qlearn::Transition;

constexpr int kFeatures = 20;

// Binary observation with `count` active cells drawn from [lo, hi).
Observation RandomObservation(Rng& rng, int lo, int hi, int count) {
  std::set<int32_t> active;
  while (static_cast<int>(active.size()) < count) {
    active.insert(lo + UniformInt(rng, hi - lo));
  }
  Observation o;
  o.size = kFeatures;
  o.active.assign(active.begin(), active.end());
  o.key = envs::HashActive(o.active);
  return o;
}

ReplayBuffer Buffer(Rng& rng, int n, int lo, int hi) {
  ReplayBuffer b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.obs = RandomObservation(rng, lo, hi, 3);
    t.next_obs = t.obs;
    b.Add(t);
  }
  return b;
}

TEST(DatasetTest, ConcatenatesAndSplitsNinetyTen) {
  Rng rng(1);
  std::vector<ReplayBuffer> buffers;
  for (int k = 0; k < 5; ++k) buffers.push_back(Buffer(rng, 3000, 0, kFeatures));
  std::vector<const ReplayBuffer*> ptrs;
  for (const auto& b : buffers) ptrs.push_back(&b);
  const LabeledDataset ds =
      BuildDataset(ptrs, {"a", "b", "c", "d", "e"}, /*seed=*/7);
  EXPECT_EQ(ds.size(), 15000u);
  EXPECT_EQ(ds.train.size(), 13500u);
  EXPECT_EQ(ds.validation.size(), 1500u);
  EXPECT_EQ(ds.LabelHistogram(), (std::vector<int64_t>(5, 3000)));
  std::vector<std::size_t> all = ds.train;
  all.insert(all.end(), ds.validation.begin(), ds.validation.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(15000);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
  // Seeded: same seed same split, other seed other split.
  EXPECT_EQ(BuildDataset(ptrs, ds.label_ids, 7).validation, ds.validation);
  EXPECT_NE(BuildDataset(ptrs, ds.label_ids, 8).validation, ds.validation);
}

TEST(DatasetTest, RejectsEmptyOrTooFewBuffers) {
  Rng rng(2);
  const ReplayBuffer full = Buffer(rng, 10, 0, kFeatures);
  const ReplayBuffer empty(10);
  EXPECT_THROW(BuildDataset({&full, &empty}, {"a", "b"}, 0), InvalidArgument);
  EXPECT_THROW(BuildDataset({&full}, {"a"}, 0), InvalidArgument);
  EXPECT_THROW(BuildDataset({&full, &full}, {"a"}, 0), InvalidArgument);
}

TEST(DatasetTest, LabelsFromTransitions) {
  ReplayBuffer b(4);
  for (int i = 0; i < 4; ++i) {
    Transition t;
    t.obs.size = kFeatures;
    t.opponent = i % 2;
    b.Add(t);
  }
  const LabeledDataset ds = BuildDatasetFromLabels(b, {"x", "y"}, 0);
  EXPECT_EQ(ds.LabelHistogram(), (std::vector<int64_t>{2, 2}));
  Transition bad;
  bad.obs.size = kFeatures;
  bad.opponent = 2;
  b.Add(bad);
  EXPECT_THROW(BuildDatasetFromLabels(b, {"x", "y"}, 0), InvalidArgument);
}

LabeledDataset Blobs(uint64_t seed, int per_class, bool separable) {
  Rng rng(seed);
  const ReplayBuffer a = Buffer(rng, per_class, 0, separable ? 10 : kFeatures);
  const ReplayBuffer b =
      Buffer(rng, per_class, separable ? 10 : 0, kFeatures);
  return BuildDataset({&a, &b}, {"left", "right"}, seed);
}

TEST(ClassifierTest, SeparableBlobs) {
  const LabeledDataset ds = Blobs(3, 3000, true);
  ClassifierConfig config;
  config.seed = 4;
  const ClassifierTraining t = TrainClassifier(ds, config);
  EXPECT_GE(ValidationAccuracy(t.classifier, ds), 0.99);
  EXPECT_FALSE(t.train_loss.empty());
  EXPECT_EQ(t.train_loss.size(), t.validation_loss.size());
  // A validation point is assigned to its own blob.
  const std::size_t i = ds.validation.front();
  EXPECT_EQ(t.classifier.Predict(ds.observations[i]), ds.labels[i]);
}

TEST(ClassifierTest, IndistinguishableClassesAreAtChance) {
  const LabeledDataset ds = Blobs(5, 5000, false);
  ClassifierConfig config;
  config.seed = 6;
  const ClassifierTraining t = TrainClassifier(ds, config);
  EXPECT_NEAR(ValidationAccuracy(t.classifier, ds), 0.5, 0.05);
}

TEST(ClassifierTest, DefaultsMatchTheReferenceSettings) {
  const ClassifierConfig c;
  EXPECT_EQ(c.learning_rate, 5e-5);
  EXPECT_EQ(c.batch_size, 64);
  EXPECT_EQ(c.epochs, 20);
  EXPECT_EQ(c.patience, 3);
  EXPECT_EQ(c.hidden, (std::vector<int>{50, 50}));
}

TEST(ClassifierTest, OutputIsASimplex) {
  Rng rng(7);
  const Classifier c = Classifier::Network(
      qlearn::Mlp::Initialized({kFeatures, 50, 50, 3}, rng), {"a", "b", "c"});
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> p =
        c.Classify(RandomObservation(rng, 0, kFeatures, 1 + UniformInt(rng, 6)));
    double total = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(ClassifierTest, EqualLogitsGiveEqualProbabilities) {
  const Classifier c =
      Classifier::Network(qlearn::Mlp({kFeatures, 2}), {"a", "b"});
  Rng rng(8);
  EXPECT_EQ(c.Classify(RandomObservation(rng, 0, kFeatures, 3)),
            (std::vector<double>{0.5, 0.5}));
}

TEST(ClassifierTest, DimensionMismatchIsAnError) {
  const Classifier c =
      Classifier::Network(qlearn::Mlp({kFeatures, 2}), {"a", "b"});
  Observation o;
  o.size = kFeatures + 1;
  EXPECT_THROW(c.Classify(o), InvalidArgument);
}

TEST(ClassifierTest, TrainingNeverTouchesTheValidationSplit) {
  LabeledDataset ds = Blobs(9, 500, true);
  const uint64_t before = HashIndices(ds.validation);
  ClassifierConfig config;
  config.epochs = 3;
  config.patience = 0;
  config.seed = 10;
  const ClassifierTraining a = TrainClassifier(ds, config);
  EXPECT_EQ(HashIndices(ds.validation), before);
  // Relabeling the validation points must not change the trained weights.
  for (std::size_t i : ds.validation) ds.labels[i] = 1 - ds.labels[i];
  const ClassifierTraining b = TrainClassifier(ds, config);
  EXPECT_EQ(a.classifier.net(), b.classifier.net());
  EXPECT_EQ(a.train_loss, b.train_loss);
}

TEST(ClassifierTest, EarlyStoppingKeepsTheBestEpoch) {
  const LabeledDataset ds = Blobs(5, 500, false);
  ClassifierConfig config;
  config.epochs = 30;
  config.learning_rate = 1e-2;  // overfits quickly
  config.seed = 11;
  const ClassifierTraining t = TrainClassifier(ds, config);
  ASSERT_GE(t.best_epoch, 0);
  const double best = t.validation_loss[static_cast<std::size_t>(t.best_epoch)];
  for (double v : t.validation_loss) EXPECT_GE(v, best);
  EXPECT_LE(t.validation_loss.size(),
            static_cast<std::size_t>(t.best_epoch + 1 + config.patience));
  EXPECT_NEAR(CrossEntropy(t.classifier, ds, ds.validation), best, 1e-12);
}

TEST(AccuracyTest, ReferenceClassifiers) {
  LabeledDataset ds = Blobs(12, 2000, true);
  // Perfect: a table holding the true label of every key.
  std::unordered_map<uint64_t, std::vector<double>> perfect;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::vector<double> row(2, 0.0);
    row[static_cast<std::size_t>(ds.labels[i])] = 1.0;
    perfect[ds.observations[i].key] = row;
  }
  EXPECT_EQ(ValidationAccuracy(Classifier::Tabular(kFeatures, ds.label_ids,
                                                   perfect),
                               ds),
            1.0);
  // Constant class 0: the frequency of class 0 among validation points.
  const Classifier constant =
      Classifier::Network(qlearn::Mlp({kFeatures, 2}), ds.label_ids);
  double zeros = 0.0;
  for (std::size_t i : ds.validation) zeros += ds.labels[i] == 0;
  EXPECT_DOUBLE_EQ(ValidationAccuracy(constant, ds),
                   zeros / static_cast<double>(ds.validation.size()));
  // Random labels from a random network: 1/K within three binomial sigmas.
  Rng rng(13);
  std::vector<int> k_labels{0, 1, 2};
  LabeledDataset three = ds;
  three.label_ids = {"a", "b", "c"};
  for (int& l : three.labels) l = UniformInt(rng, 3);
  const Classifier random = Classifier::Network(
      qlearn::Mlp::Initialized({kFeatures, 50, 50, 3}, rng), three.label_ids);
  const double n = static_cast<double>(three.validation.size());
  EXPECT_NEAR(ValidationAccuracy(random, three), 1.0 / 3.0,
              3.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n));
  three.validation.clear();
  EXPECT_THROW(ValidationAccuracy(random, three), InvalidArgument);
}

TEST(TabularClassifierTest, SmoothedCounts) {
  LabeledDataset ds;
  ds.label_ids = {"a", "b"};
  Observation x;
  x.size = 4;
  x.active = {1};
  x.key = 11;
  Observation y = x;
  y.key = 12;
  ds.observations = {x, x, x, y};
  ds.labels = {0, 0, 1, 1};
  ds.train = {0, 1, 2, 3};
  const Classifier c = TrainTabularClassifier(ds);
  EXPECT_EQ(c.Classify(x), (std::vector<double>{3.0 / 5.0, 2.0 / 5.0}));
  EXPECT_EQ(c.Classify(y), (std::vector<double>{1.0 / 3.0, 2.0 / 3.0}));
  Observation unseen = x;
  unseen.key = 99;
  EXPECT_EQ(c.Classify(unseen), (std::vector<double>{0.5, 0.5}));
}

TEST(ClassifierIoTest, RoundTripsThroughModelFiles) {
  Rng rng(14);
  const Classifier net = Classifier::Network(
      qlearn::Mlp::Initialized({kFeatures, 50, 50, 3}, rng), {"a", "b", "c"});
  const std::string path =
      (std::filesystem::temp_directory_path() / "qmixlab_opc_test.json").string();
  qlearn::SaveModel(path, net.ToDocument(), /*force=*/true);
  const qlearn::ModelDocument doc = qlearn::LoadModel(path);
  EXPECT_EQ(doc.variant, "classifier");
  const Classifier back = Classifier::FromDocument(doc);
  EXPECT_EQ(back.net(), net.net());
  EXPECT_EQ(back.labels(), net.labels());

  const Classifier table = Classifier::Tabular(
      kFeatures, {"a", "b"}, {{5, {0.25, 0.75}}, {9, {1.0, 0.0}}});
  qlearn::SaveModel(path, table.ToDocument(), true);
  const Classifier table_back = Classifier::FromDocument(qlearn::LoadModel(path));
  EXPECT_EQ(table_back.table(), table.table());

  qlearn::ModelDocument q = doc;
  q.variant = "mlp";
  EXPECT_THROW(Classifier::FromDocument(q), CorruptDocument);
  std::filesystem::remove(path);
}

// With the true label as evidence, belief mixing collapses onto the
// component of the opponent being played, so the mixed agent and that
// component's greedy agent take identical actions under shared seeds.
TEST(OracleEvidenceTest, MatchesEachComponentUnderSharedSeeds) {
  envs::SoccerGame game;
  const std::vector<std::string> ids{"random", "chaser", "camper"};
  const auto pool = qlearn::MakeOpponentPool(game, ids);
  Rng rng(15);
  std::vector<std::shared_ptr<const qlearn::QFunction>> qs;
  for (int k = 0; k < 3; ++k) {
    qs.push_back(std::make_shared<qlearn::QFunction>(qlearn::QFunction::RandomMlp(
        game.observation_size(), game.num_actions(), {50, 50}, rng)));
  }
  auto comps = std::make_shared<qmix::ComponentSet>(ids, qs);
  const qmix::MixedStrategy sigma = qmix::MixedStrategy::Uniform(ids);
  const qmix::QMixBeliefAgent oracle(
      comps, sigma, std::make_shared<qmix::TrueLabelEvidence>(ids));
  for (int k = 0; k < 3; ++k) {
    const auto point = qmix::MixedStrategy::PointMass(ids, k);
    const qlearn::GreedyQAgent component(qs[static_cast<std::size_t>(k)]);
    const auto a = qlearn::EvaluateAgent(game, oracle, pool, point, 20, 16);
    const auto b = qlearn::EvaluateAgent(game, component, pool, point, 20, 16);
    EXPECT_EQ(a.returns, b.returns) << ids[static_cast<std::size_t>(k)];
  }
}

}  // namespace
}  // namespace qmixlab::opc
