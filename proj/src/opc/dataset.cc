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

#include "qmixlab/opc/dataset.h"

#include <algorithm>
#include <cmath>

#include "qmixlab/common/error.h"
#include "qmixlab/common/random.h"

namespace qmixlab::opc {
namespace {

void Split(LabeledDataset& ds, uint64_t seed) {
  std::vector<std::size_t> order(ds.observations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(DeriveSeed(seed, {0x5eed}));
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_train = static_cast<std::size_t>(
      std::llround(kTrainFraction * static_cast<double>(order.size())));
  ds.train.assign(order.begin(), order.begin() + n_train);
  ds.validation.assign(order.begin() + n_train, order.end());
}

void CheckSize(const LabeledDataset& ds, const envs::Observation& obs) {
  if (!ds.observations.empty() && obs.size != ds.observations.front().size) {
    throw InvalidArgument("dataset: observation sizes differ (" +
                          std::to_string(obs.size) + " vs " +
                          std::to_string(ds.observations.front().size) + ")");
  }
}

}  // namespace

std::vector<int64_t> LabeledDataset::LabelHistogram() const {
  std::vector<int64_t> h(label_ids.size(), 0);
  for (int l : labels) ++h[static_cast<std::size_t>(l)];
  return h;
}

LabeledDataset BuildDataset(
    const std::vector<const qlearn::ReplayBuffer*>& buffers,
    std::vector<std::string> label_ids, uint64_t seed) {
  if (buffers.size() < 2) {
    throw InvalidArgument("dataset: need at least two opponent buffers");
  }
  if (buffers.size() != label_ids.size()) {
    throw InvalidArgument("dataset: " + std::to_string(buffers.size()) +
                          " buffers for " + std::to_string(label_ids.size()) +
                          " labels");
  }
  LabeledDataset ds;
  ds.label_ids = std::move(label_ids);
  for (std::size_t k = 0; k < buffers.size(); ++k) {
    if (buffers[k] == nullptr || buffers[k]->empty()) {
      throw InvalidArgument("dataset: buffer for '" + ds.label_ids[k] +
                            "' is empty");
    }
    const qlearn::ReplayBuffer& b = *buffers[k];
    for (std::size_t i = 0; i < b.size(); ++i) {
      CheckSize(ds, b[i].obs);
      ds.observations.push_back(b[i].obs);
      ds.labels.push_back(static_cast<int>(k));
    }
  }
  Split(ds, seed);
  return ds;
}

LabeledDataset BuildDatasetFromLabels(const qlearn::ReplayBuffer& buffer,
                                      std::vector<std::string> label_ids,
                                      uint64_t seed) {
  if (label_ids.size() < 2) {
    throw InvalidArgument("dataset: need at least two opponent labels");
  }
  if (buffer.empty()) throw InvalidArgument("dataset: buffer is empty");
  LabeledDataset ds;
  ds.label_ids = std::move(label_ids);
  const int k_count = ds.num_classes();
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const qlearn::Transition& t = buffer[i];
    if (t.opponent < 0 || t.opponent >= k_count) {
      throw InvalidArgument("dataset: transition " + std::to_string(i) +
                            " has opponent label " +
                            std::to_string(t.opponent));
    }
    CheckSize(ds, t.obs);
    ds.observations.push_back(t.obs);
    ds.labels.push_back(t.opponent);
  }
  Split(ds, seed);
  return ds;
}

uint64_t HashIndices(const std::vector<std::size_t>& indices) {
  uint64_t h = Mix64(indices.size());
  for (std::size_t i : indices) h = Mix64(h ^ Mix64(i + 1));
  return h;
}

}  // namespace qmixlab::opc
