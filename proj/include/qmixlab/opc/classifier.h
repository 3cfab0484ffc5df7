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

#ifndef QMIXLAB_OPC_CLASSIFIER_H_
#define QMIXLAB_OPC_CLASSIFIER_H_

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "qmixlab/qlearn/mlp.h"
#include "qmixlab/qlearn/model_io.h"
#include "qmixlab/qmix/mixing.h"
#include "qmixlab/opc/dataset.h"

namespace qmixlab::opc {

// Opponent policy classifier: maps an observation to a distribution over
// opponent ids. Either an MLP with a K-way softmax head or a table of
// smoothed per-key label frequencies.
class Classifier {
 public:
  Classifier() = default;
  static Classifier Network(qlearn::Mlp net, std::vector<std::string> labels);
  static Classifier Tabular(
      int observation_size, std::vector<std::string> labels,
      std::unordered_map<uint64_t, std::vector<double>> probabilities);

  bool is_network() const { return is_network_; }
  int num_classes() const { return static_cast<int>(labels_.size()); }
  int observation_size() const { return observation_size_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const qlearn::Mlp& net() const { return net_; }
  const std::unordered_map<uint64_t, std::vector<double>>& table() const {
    return table_;
  }

  // Probabilities over labels(); always a simplex. Unseen keys of a table
  // classifier get the uniform distribution. Throws InvalidArgument on an
  // observation of the wrong size.
  std::vector<double> Classify(const envs::Observation& obs) const;
  int Predict(const envs::Observation& obs) const;

  qlearn::ModelDocument ToDocument() const;
  // Throws CorruptDocument unless the document holds a classifier.
  static Classifier FromDocument(const qlearn::ModelDocument& doc);

 private:
  bool is_network_ = false;
  int observation_size_ = 0;
  std::vector<std::string> labels_;
  qlearn::Mlp net_;
  std::unordered_map<uint64_t, std::vector<double>> table_;
};

struct ClassifierConfig {
  double learning_rate = 5e-5;
  int batch_size = 64;
  int epochs = 20;
  // Stop after this many epochs without a lower validation loss and keep
  // the best weights; <= 0 trains for all epochs.
  int patience = 3;
  std::vector<int> hidden = {50, 50};
  uint64_t seed = 0;

  void Validate() const;
};

struct ClassifierTraining {
  Classifier classifier;
  std::vector<double> train_loss;       // mean cross-entropy per epoch
  std::vector<double> validation_loss;  // after each epoch
  std::vector<double> validation_accuracy;  // after each epoch; 0 if no split
  int best_epoch = -1;                  // 0-based epoch of the kept weights
};

// Cross-entropy minimization with Adam on ds.train only. The validation
// split is read for early stopping and never contributes a gradient.
ClassifierTraining TrainClassifier(const LabeledDataset& ds,
                                   const ClassifierConfig& config);

// Per-key label counts over the train split with add-one smoothing.
Classifier TrainTabularClassifier(const LabeledDataset& ds);

// Mean cross-entropy of the classifier on the given points.
double CrossEntropy(const Classifier& c, const LabeledDataset& ds,
                    const std::vector<std::size_t>& indices);

// Fraction of points whose argmax matches the label.
double Accuracy(const Classifier& c, const LabeledDataset& ds,
                const std::vector<std::size_t>& indices);

// Accuracy on the validation split; throws InvalidArgument when it is
// empty.
double ValidationAccuracy(const Classifier& c, const LabeledDataset& ds);

// Classifier outputs as per-opponent evidence for qmix::BeliefFromEvidence.
// The outputs approximate a posterior under the training label frequencies;
// mixing multiplies them by sigma.
class ClassifierEvidence final : public qmix::EvidenceSource {
 public:
  explicit ClassifierEvidence(std::shared_ptr<const Classifier> classifier)
      : classifier_(std::move(classifier)) {}
  const std::vector<std::string>& ids() const override {
    return classifier_->labels();
  }
  std::vector<double> Evidence(
      const envs::Observation& obs,
      const qlearn::EpisodeContext& context) const override;

 private:
  std::shared_ptr<const Classifier> classifier_;
};

}  // namespace qmixlab::opc

#endif  // QMIXLAB_OPC_CLASSIFIER_H_
