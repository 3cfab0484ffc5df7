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

#ifndef QMIXLAB_QMIX_MIXED_STRATEGY_H_
#define QMIXLAB_QMIX_MIXED_STRATEGY_H_

#include <string>
#include <string_view>
#include <vector>

#include "qmixlab/common/random.h"

namespace qmixlab::qmix {

// A distribution over an ordered set of opponent ids. Weights are
// non-negative and sum to 1 within 1e-9; the constructor enforces this.
class MixedStrategy {
 public:
  MixedStrategy(std::vector<std::string> ids, std::vector<double> weights);

  static MixedStrategy PointMass(std::vector<std::string> ids, int k);
  static MixedStrategy Uniform(std::vector<std::string> ids);

  // Parses "w0,w1,..." aligned with ids, or "id=w,id=w" naming a subset
  // (unnamed ids get weight 0).
  static MixedStrategy Parse(std::string_view literal,
                             std::vector<std::string> ids);

  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<double>& weights() const { return weights_; }
  int size() const { return static_cast<int>(ids_.size()); }
  double weight(int k) const { return weights_[static_cast<std::size_t>(k)]; }
  int IndexOf(std::string_view id) const;  // -1 if absent

  // "id=w,..." with round-trip precision.
  std::string ToString() const;

  bool operator==(const MixedStrategy&) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<double> weights_;
};

// Categorical draw of an opponent index; one uniform from rng. The caller
// keeps the opponent fixed for the whole episode.
int SampleOpponent(const MixedStrategy& sigma, Rng& rng);

}  // namespace qmixlab::qmix

#endif  // QMIXLAB_QMIX_MIXED_STRATEGY_H_
