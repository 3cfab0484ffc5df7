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

#include "qmixlab/envs/environment.h"

namespace qmixlab::envs {

std::vector<double> Observation::Dense() const {
  std::vector<double> dense(static_cast<std::size_t>(size), 0.0);
  for (int32_t i : active) dense[static_cast<std::size_t>(i)] = 1.0;
  return dense;
}

uint64_t HashActive(const std::vector<int32_t>& active) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (int32_t i : active) {
    h = Mix64(h ^ static_cast<uint64_t>(static_cast<uint32_t>(i)));
  }
  return h;
}

}  // namespace qmixlab::envs
