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

#include "qmixlab/qlearn/replay_buffer.h"

#include "qmixlab/common/error.h"

namespace qmixlab::qlearn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  data_.reserve(capacity);
}

void ReplayBuffer::Add(Transition t) {
  ++insertions_;
  if (capacity_ == 0) return;
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
    return;
  }
  data_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= data_.size()) throw InvalidArgument("replay buffer: index out of range");
  return data_[(head_ + i) % data_.size()];
}

std::vector<std::size_t> ReplayBuffer::SampleIndices(std::size_t n,
                                                     Rng& rng) const {
  if (data_.empty()) throw StateError("replay buffer: sampling an empty buffer");
  std::vector<std::size_t> out(n);
  const int size = static_cast<int>(data_.size());
  for (auto& i : out) i = static_cast<std::size_t>(UniformInt(rng, size));
  return out;
}

std::vector<Transition> ReplayBuffer::Snapshot() const {
  std::vector<Transition> out;
  out.reserve(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) out.push_back((*this)[i]);
  return out;
}

}  // namespace qmixlab::qlearn
