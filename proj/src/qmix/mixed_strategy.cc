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

#include "qmixlab/qmix/mixed_strategy.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "qmixlab/common/error.h"
#include "qmixlab/envs/policy.h"

namespace qmixlab::qmix {
namespace {

std::string FormatWeight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  // Prefer the shortest representation that round-trips.
  for (int p = 1; p <= 17; ++p) {
    char shortbuf[32];
    std::snprintf(shortbuf, sizeof(shortbuf), "%.*g", p, w);
    if (std::strtod(shortbuf, nullptr) == w) return shortbuf;
  }
  return buf;
}

double ParseWeight(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("mixture: cannot parse weight '" +
                          std::string(text) + "'");
  }
  return value;
}

}  // namespace

MixedStrategy::MixedStrategy(std::vector<std::string> ids,
                             std::vector<double> weights)
    : ids_(std::move(ids)), weights_(std::move(weights)) {
  if (ids_.size() != weights_.size()) {
    throw InvalidArgument("mixture: " + std::to_string(ids_.size()) +
                          " ids but " + std::to_string(weights_.size()) +
                          " weights");
  }
  if (ids_.empty()) throw InvalidArgument("mixture: no opponents");
  if (std::set<std::string>(ids_.begin(), ids_.end()).size() != ids_.size()) {
    throw InvalidArgument("mixture: duplicate opponent id");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("mixture: weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("mixture: weights sum " + FormatWeight(sum));
  }
}

MixedStrategy MixedStrategy::PointMass(std::vector<std::string> ids, int k) {
  if (k < 0 || k >= static_cast<int>(ids.size())) {
    throw InvalidArgument("mixture: point mass index out of range");
  }
  std::vector<double> w(ids.size(), 0.0);
  w[static_cast<std::size_t>(k)] = 1.0;
  return MixedStrategy(std::move(ids), std::move(w));
}

MixedStrategy MixedStrategy::Uniform(std::vector<std::string> ids) {
  std::vector<double> w(ids.size(), 1.0 / static_cast<double>(ids.size()));
  return MixedStrategy(std::move(ids), std::move(w));
}

MixedStrategy MixedStrategy::Parse(std::string_view literal,
                                   std::vector<std::string> ids) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= literal.size()) {
    const std::size_t comma = literal.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? literal.size() : comma;
    parts.push_back(literal.substr(start, end - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::vector<double> weights(ids.size(), 0.0);
  const bool named = literal.find('=') != std::string_view::npos;
  if (!named) {
    if (parts.size() != ids.size()) {
      throw InvalidArgument("mixture: " + std::to_string(parts.size()) +
                            " weights for " + std::to_string(ids.size()) +
                            " opponents");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      weights[i] = ParseWeight(parts[i]);
    }
  } else {
    std::vector<bool> seen(ids.size(), false);
    for (std::string_view part : parts) {
      const std::size_t eq = part.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidArgument("mixture: expected id=weight, got '" +
                              std::string(part) + "'");
      }
      std::string_view id = part.substr(0, eq);
      while (!id.empty() && id.front() == ' ') id.remove_prefix(1);
      while (!id.empty() && id.back() == ' ') id.remove_suffix(1);
      std::size_t k = 0;
      while (k < ids.size() && ids[k] != id) ++k;
      if (k == ids.size()) {
        throw InvalidArgument("mixture: unknown opponent id '" +
                              std::string(id) + "'");
      }
      if (seen[k]) {
        throw InvalidArgument("mixture: opponent '" + std::string(id) +
                              "' given twice");
      }
      seen[k] = true;
      weights[k] = ParseWeight(part.substr(eq + 1));
    }
  }
  return MixedStrategy(std::move(ids), std::move(weights));
}

int MixedStrategy::IndexOf(std::string_view id) const {
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    if (ids_[k] == id) return static_cast<int>(k);
  }
  return -1;
}

std::string MixedStrategy::ToString() const {
  std::string out;
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    if (k > 0) out += ',';
    out += ids_[k] + "=" + FormatWeight(weights_[k]);
  }
  return out;
}

int SampleOpponent(const MixedStrategy& sigma, Rng& rng) {
  return envs::SampleCategorical(sigma.weights(), rng);
}

}  // namespace qmixlab::qmix
