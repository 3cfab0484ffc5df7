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

#ifndef QMIXLAB_OPC_DATASET_H_
#define QMIXLAB_OPC_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/qlearn/replay_buffer.h"

namespace qmixlab::opc {

// Observations labeled with the opponent that produced them, plus a seeded
// 90/10 train/validation split of their indices.
struct LabeledDataset {
  std::vector<envs::Observation> observations;
  std::vector<int> labels;
  std::vector<std::string> label_ids;
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;

  int num_classes() const { return static_cast<int>(label_ids.size()); }
  int observation_size() const {
    return observations.empty() ? 0 : observations.front().size;
  }
  std::size_t size() const { return observations.size(); }
  // Per-label point counts.
  std::vector<int64_t> LabelHistogram() const;
};

inline constexpr double kTrainFraction = 0.9;

// Concatenates the observations of each pure-opponent buffer with label k
// (buffers[k] was trained against label_ids[k]), shuffles with `seed` and
// splits 90/10. Throws InvalidArgument for fewer than two buffers, an empty
// buffer, or mismatched observation sizes.
LabeledDataset BuildDataset(
    const std::vector<const qlearn::ReplayBuffer*>& buffers,
    std::vector<std::string> label_ids, uint64_t seed);

// Same, labeling every transition by its recorded opponent index. Used when
// one buffer holds experience against several opponents.
LabeledDataset BuildDatasetFromLabels(const qlearn::ReplayBuffer& buffer,
                                      std::vector<std::string> label_ids,
                                      uint64_t seed);

// Order-sensitive hash of an index list; used to check that the split is
// left alone.
uint64_t HashIndices(const std::vector<std::size_t>& indices);

}  // namespace qmixlab::opc

#endif  // QMIXLAB_OPC_DATASET_H_
