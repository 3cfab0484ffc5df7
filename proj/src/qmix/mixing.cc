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

#include "qmixlab/qmix/mixing.h"

#include <cmath>

#include "qmixlab/common/error.h"
#include "qmixlab/simd/kernels.h"

namespace qmixlab::qmix {

ComponentSet::ComponentSet(
    std::vector<std::string> ids,
    std::vector<std::shared_ptr<const qlearn::QFunction>> qs)
    : ids_(std::move(ids)), qs_(std::move(qs)) {
  if (ids_.empty()) throw InvalidArgument("component set: no components");
  if (ids_.size() != qs_.size()) {
    throw InvalidArgument("component set: " + std::to_string(ids_.size()) +
                          " ids but " + std::to_string(qs_.size()) +
                          " Q-functions");
  }
  for (std::size_t k = 0; k < qs_.size(); ++k) {
    if (!qs_[k]) throw InvalidArgument("component set: missing Q-function");
    for (std::size_t j = 0; j < k; ++j) {
      if (ids_[j] == ids_[k]) {
        throw InvalidArgument("component set: duplicate id '" + ids_[k] + "'");
      }
    }
  }
  num_actions_ = qs_[0]->num_actions();
  observation_size_ = qs_[0]->observation_size();
  for (const auto& q : qs_) {
    if (q->num_actions() != num_actions_ ||
        q->observation_size() != observation_size_) {
      throw InvalidArgument(
          "component set: components disagree on shape (" +
          std::to_string(q->observation_size()) + "x" +
          std::to_string(q->num_actions()) + " vs " +
          std::to_string(observation_size_) + "x" +
          std::to_string(num_actions_) + ")");
    }
  }
}

int ComponentSet::IndexOf(const std::string& id) const {
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    if (ids_[k] == id) return static_cast<int>(k);
  }
  return -1;
}

std::vector<double> ComponentSet::Align(const MixedStrategy& sigma) const {
  std::vector<double> w(ids_.size(), 0.0);
  for (int j = 0; j < sigma.size(); ++j) {
    const int k = IndexOf(sigma.ids()[static_cast<std::size_t>(j)]);
    if (k < 0) {
      if (sigma.weight(j) == 0.0) continue;
      throw InvalidArgument("opponent '" + sigma.ids()[static_cast<std::size_t>(j)] +
                            "' has no component Q-function");
    }
    w[static_cast<std::size_t>(k)] = sigma.weight(j);
  }
  return w;
}

void ComponentSet::Values(const envs::Observation& obs,
                          std::vector<double>& out) const {
  const std::size_t a = static_cast<std::size_t>(num_actions_);
  out.resize(qs_.size() * a);
  for (std::size_t k = 0; k < qs_.size(); ++k) {
    qs_[k]->Values(obs, std::span<double>(out).subspan(k * a, a));
  }
}

std::vector<double> MixRows(std::span<const double> values,
                            std::span<const double> weights, int num_actions) {
  const std::size_t a = static_cast<std::size_t>(num_actions);
  if (values.size() != weights.size() * a) {
    throw InvalidArgument("mix: value matrix does not match weights");
  }
  std::vector<double> out(a, 0.0);
  const simd::KernelTable& k = simd::Kernels();
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] == 0.0) continue;
    k.axpy(weights[j], values.data() + j * a, out.data(), a);
  }
  return out;
}

std::vector<double> MixQPrior(const envs::Observation& obs,
                              const ComponentSet& comps,
                              const MixedStrategy& sigma) {
  const std::vector<double> w = comps.Align(sigma);
  std::vector<double> values;
  comps.Values(obs, values);
  return MixRows(values, w, comps.num_actions());
}

OpponentBelief BeliefFromEvidence(const MixedStrategy& prior,
                                  std::span<const double> evidence) {
  if (static_cast<int>(evidence.size()) != prior.size()) {
    throw InvalidArgument("belief: " + std::to_string(evidence.size()) +
                          " evidence values for " +
                          std::to_string(prior.size()) + " opponents");
  }
  std::vector<double> w(evidence.size());
  double total = 0.0;
  for (std::size_t k = 0; k < evidence.size(); ++k) {
    if (!(evidence[k] >= 0.0) || !std::isfinite(evidence[k])) {
      throw InvalidArgument("belief: evidence must be finite and non-negative");
    }
    w[k] = prior.weight(static_cast<int>(k)) * evidence[k];
    total += w[k];
  }
  if (!(total > 0.0)) return prior;
  for (double& x : w) x /= total;
  return MixedStrategy(prior.ids(), std::move(w));
}

std::vector<double> MixQWithBelief(const envs::Observation& obs,
                                   const ComponentSet& comps,
                                   const OpponentBelief& psi) {
  return MixQPrior(obs, comps, psi);
}

std::vector<double> TrueLabelEvidence::Evidence(
    const envs::Observation&, const qlearn::EpisodeContext& context) const {
  if (context.opponent < 0 ||
      context.opponent >= static_cast<int>(ids_.size())) {
    throw StateError("true-label evidence: episode opponent unknown");
  }
  std::vector<double> e(ids_.size(), 0.0);
  e[static_cast<std::size_t>(context.opponent)] = 1.0;
  return e;
}

QMixPriorAgent::QMixPriorAgent(std::shared_ptr<const ComponentSet> comps,
                               const MixedStrategy& sigma)
    : comps_(std::move(comps)), weights_(comps_->Align(sigma)) {}

std::vector<double> QMixPriorAgent::Values(const envs::Observation& obs) const {
  std::vector<double> values;
  comps_->Values(obs, values);
  return MixRows(values, weights_, comps_->num_actions());
}

int QMixPriorAgent::Act(const envs::Observation& obs,
                        const qlearn::EpisodeContext&) const {
  return qlearn::GreedyAction(Values(obs));
}

QMixBeliefAgent::QMixBeliefAgent(std::shared_ptr<const ComponentSet> comps,
                                 const MixedStrategy& sigma,
                                 std::shared_ptr<const EvidenceSource> evidence)
    : comps_(std::move(comps)),
      evidence_(std::move(evidence)),
      prior_(comps_->ids(), comps_->Align(sigma)) {
  for (const std::string& id : comps_->ids()) {
    int slot = -1;
    const auto& ev_ids = evidence_->ids();
    for (std::size_t j = 0; j < ev_ids.size(); ++j) {
      if (ev_ids[j] == id) slot = static_cast<int>(j);
    }
    if (slot < 0) {
      throw InvalidArgument("evidence source does not cover opponent '" + id +
                            "'");
    }
    evidence_index_.push_back(slot);
  }
}

std::vector<double> QMixBeliefAgent::Values(
    const envs::Observation& obs, const qlearn::EpisodeContext& context) const {
  const std::vector<double> raw = evidence_->Evidence(obs, context);
  std::vector<double> e(evidence_index_.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = raw.at(static_cast<std::size_t>(evidence_index_[k]));
  }
  const OpponentBelief psi = BeliefFromEvidence(prior_, e);
  std::vector<double> values;
  comps_->Values(obs, values);
  return MixRows(values, psi.weights(), comps_->num_actions());
}

int QMixBeliefAgent::Act(const envs::Observation& obs,
                         const qlearn::EpisodeContext& context) const {
  return qlearn::GreedyAction(Values(obs, context));
}

}  // namespace qmixlab::qmix
