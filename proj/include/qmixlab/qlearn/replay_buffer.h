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

#ifndef QMIXLAB_QLEARN_REPLAY_BUFFER_H_
#define QMIXLAB_QLEARN_REPLAY_BUFFER_H_

#include <cstdint>
#include <vector>

#include "qmixlab/common/random.h"
#include "qmixlab/envs/environment.h"

namespace qmixlab::qlearn {

struct Transition {
  envs::Observation obs;
  int action = 0;
  double reward = 0.0;
  envs::Observation next_obs;
  bool terminal = false;
  int opponent = -1;  // index of the pure opponent for the whole episode

  bool operator==(const Transition&) const = default;
};

// Fixed-capacity ring buffer; the oldest transition is evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 0);

  void Add(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return data_.empty(); }
  // Total number of Add calls, including evicted transitions.
  uint64_t insertions() const { return insertions_; }

  // i-th stored transition, oldest first.
  const Transition& operator[](std::size_t i) const;

  // n indices drawn uniformly with replacement.
  std::vector<std::size_t> SampleIndices(std::size_t n, Rng& rng) const;

  // Contents oldest first.
  std::vector<Transition> Snapshot() const;

 private:
  std::size_t capacity_;
  std::vector<Transition> data_;
  std::size_t head_ = 0;  // slot of the oldest transition once full
  uint64_t insertions_ = 0;
};

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_REPLAY_BUFFER_H_
