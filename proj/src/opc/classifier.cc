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

#include "qmixlab/opc/classifier.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmixlab/common/error.h"
#include "qmixlab/common/random.h"
#include "qmixlab/qlearn/adam.h"
#include "qmixlab/qlearn/qfunction.h"

namespace qmixlab::opc {

Classifier Classifier::Network(qlearn::Mlp net,
                               std::vector<std::string> labels) {
  if (net.output_size() != static_cast<int>(labels.size())) {
    throw InvalidArgument("classifier: network has " +
                          std::to_string(net.output_size()) + " outputs for " +
                          std::to_string(labels.size()) + " labels");
  }
  Classifier c;
  c.is_network_ = true;
  c.observation_size_ = net.input_size();
  c.labels_ = std::move(labels);
  c.net_ = std::move(net);
  return c;
}

Classifier Classifier::Tabular(
    int observation_size, std::vector<std::string> labels,
    std::unordered_map<uint64_t, std::vector<double>> probabilities) {
  if (labels.empty()) throw InvalidArgument("classifier: no labels");
  for (const auto& [key, p] : probabilities) {
    if (p.size() != labels.size()) {
      throw InvalidArgument("classifier: table row has wrong width");
    }
  }
  Classifier c;
  c.observation_size_ = observation_size;
  c.labels_ = std::move(labels);
  c.table_ = std::move(probabilities);
  return c;
}

std::vector<double> Classifier::Classify(const envs::Observation& obs) const {
  if (obs.size != observation_size_) {
    throw InvalidArgument("classifier: observation has " +
                          std::to_string(obs.size) + " features, expected " +
                          std::to_string(observation_size_));
  }
  if (is_network_) {
    const std::vector<double> logits = net_.Forward(obs);
    for (double x : logits) {
      if (!std::isfinite(x)) throw NumericalError("classifier: non-finite logit");
    }
    return qlearn::Softmax(logits);
  }
  auto it = table_.find(obs.key);
  if (it == table_.end()) {
    return std::vector<double>(labels_.size(), 1.0 / labels_.size());
  }
  return it->second;
}

int Classifier::Predict(const envs::Observation& obs) const {
  return qlearn::GreedyAction(Classify(obs));
}

qlearn::ModelDocument Classifier::ToDocument() const {
  qlearn::ModelDocument doc;
  doc.variant = is_network_ ? "classifier" : "tabular_classifier";
  doc.observation_size = observation_size_;
  doc.output_size = num_classes();
  doc.labels = labels_;
  if (is_network_) {
    doc.net = net_;
  } else {
    doc.table = table_;
  }
  return doc;
}

Classifier Classifier::FromDocument(const qlearn::ModelDocument& doc) {
  if (doc.variant != "classifier" && doc.variant != "tabular_classifier") {
    throw CorruptDocument("model variant '" + doc.variant +
                          "' is not a classifier");
  }
  if (static_cast<int>(doc.labels.size()) != doc.output_size) {
    throw CorruptDocument("classifier has " +
                          std::to_string(doc.labels.size()) + " labels for " +
                          std::to_string(doc.output_size) + " outputs");
  }
  if (doc.variant == "classifier") return Network(doc.net, doc.labels);
  for (const auto& [key, p] : doc.table) {
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw CorruptDocument("classifier row is not a distribution");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw CorruptDocument("classifier row is not a distribution");
    }
  }
  return Tabular(doc.observation_size, doc.labels, doc.table);
}

void ClassifierConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("classifier: learning_rate must be positive");
  }
  if (batch_size <= 0) throw InvalidArgument("classifier: batch_size must be positive");
  if (epochs < 0) throw InvalidArgument("classifier: epochs must be >= 0");
  for (int h : hidden) {
    if (h <= 0) throw InvalidArgument("classifier: hidden sizes must be positive");
  }
}

namespace {

constexpr double kLogFloor = 1e-300;

void CheckDataset(const LabeledDataset& ds) {
  if (ds.observations.empty()) throw InvalidArgument("classifier: empty dataset");
  if (ds.observations.size() != ds.labels.size()) {
    throw InvalidArgument("classifier: labels do not match observations");
  }
  for (int l : ds.labels) {
    if (l < 0 || l >= ds.num_classes()) {
      throw InvalidArgument("classifier: label out of range");
    }
  }
}

}  // namespace

double CrossEntropy(const Classifier& c, const LabeledDataset& ds,
                    const std::vector<std::size_t>& indices) {
  if (indices.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i : indices) {
    const std::vector<double> p = c.Classify(ds.observations[i]);
    total -= std::log(std::max(p[static_cast<std::size_t>(ds.labels[i])],
                               kLogFloor));
  }
  return total / static_cast<double>(indices.size());
}

double Accuracy(const Classifier& c, const LabeledDataset& ds,
                const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw InvalidArgument("accuracy: no points");
  std::size_t hits = 0;
  for (std::size_t i : indices) {
    if (c.Predict(ds.observations[i]) == ds.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(indices.size());
}

double ValidationAccuracy(const Classifier& c, const LabeledDataset& ds) {
  if (ds.validation.empty()) {
    throw InvalidArgument("validation accuracy: empty validation split");
  }
  return Accuracy(c, ds, ds.validation);
}

ClassifierTraining TrainClassifier(const LabeledDataset& ds,
                                   const ClassifierConfig& config) {
  config.Validate();
  CheckDataset(ds);
  std::vector<int> dims{ds.observation_size()};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(ds.num_classes());
  Rng init_rng(DeriveSeed(config.seed, {0}));
  Rng batch_rng(DeriveSeed(config.seed, {1}));
  qlearn::Mlp net = qlearn::Mlp::Initialized(dims, init_rng);

  ClassifierTraining out;
  out.classifier = Classifier::Network(net, ds.label_ids);
  qlearn::AdamOptimizer adam(net.num_parameters(),
                             qlearn::AdamConfig{config.learning_rate});
  std::vector<double> grad(net.num_parameters());
  std::vector<double> dout(static_cast<std::size_t>(ds.num_classes()));
  std::vector<std::size_t> order = ds.train;
  qlearn::Mlp::Trace trace;

  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  qlearn::Mlp best_net = net;
  for (int epoch = 0; epoch < config.epochs && !order.empty(); ++epoch) {
    std::shuffle(order.begin(), order.end(), batch_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double scale = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        const envs::Observation& obs = ds.observations[i];
        net.Forward(obs, trace);
        const std::vector<double> p = qlearn::Softmax(trace.post.back());
        const std::size_t y = static_cast<std::size_t>(ds.labels[i]);
        epoch_loss -= std::log(std::max(p[y], kLogFloor));
        // d(-log p_y)/dlogits = p - onehot(y).
        for (std::size_t k = 0; k < dout.size(); ++k) {
          dout[k] = (p[k] - (k == y ? 1.0 : 0.0)) * scale;
        }
        net.Backward(obs, trace, dout, grad);
      }
      adam.Step(net.parameters(), grad);
    }
    out.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));

    const Classifier current = Classifier::Network(net, ds.label_ids);
    const double val =
        ds.validation.empty() ? out.train_loss.back()
                              : CrossEntropy(current, ds, ds.validation);
    out.validation_loss.push_back(val);
    out.validation_accuracy.push_back(
        ds.validation.empty() ? 0.0 : Accuracy(current, ds, ds.validation));
    if (val < best) {
      best = val;
      best_net = net;
      out.best_epoch = epoch;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }
  if (config.patience <= 0) {
    best_net = std::move(net);
    out.best_epoch = static_cast<int>(out.train_loss.size()) - 1;
  }
  out.classifier = Classifier::Network(std::move(best_net), ds.label_ids);
  return out;
}

Classifier TrainTabularClassifier(const LabeledDataset& ds) {
  CheckDataset(ds);
  const std::size_t k_count = static_cast<std::size_t>(ds.num_classes());
  std::unordered_map<uint64_t, std::vector<double>> counts;
  for (std::size_t i : ds.train) {
    std::vector<double>& row = counts[ds.observations[i].key];
    if (row.empty()) row.assign(k_count, 1.0);
    row[static_cast<std::size_t>(ds.labels[i])] += 1.0;
  }
  for (auto& [key, row] : counts) {
    double total = 0.0;
    for (double x : row) total += x;
    for (double& x : row) x /= total;
  }
  return Classifier::Tabular(ds.observation_size(), ds.label_ids,
                             std::move(counts));
}

std::vector<double> ClassifierEvidence::Evidence(
    const envs::Observation& obs, const qlearn::EpisodeContext&) const {
  return classifier_->Classify(obs);
}

}  // namespace qmixlab::opc
