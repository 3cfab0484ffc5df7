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

#ifndef QMIXLAB_QMIX_MIXING_H_
#define QMIXLAB_QMIX_MIXING_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/qlearn/agent.h"
#include "qmixlab/qlearn/qfunction.h"
#include "qmixlab/qmix/mixed_strategy.h"

namespace qmixlab::qmix {

// Per-opponent Q-functions aligned with opponent ids. All components share
// observation size and action count.
class ComponentSet {
 public:
  ComponentSet(std::vector<std::string> ids,
               std::vector<std::shared_ptr<const qlearn::QFunction>> qs);

  const std::vector<std::string>& ids() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }
  int num_actions() const { return num_actions_; }
  int observation_size() const { return observation_size_; }
  const qlearn::QFunction& q(int k) const { return *qs_[static_cast<std::size_t>(k)]; }
  const std::shared_ptr<const qlearn::QFunction>& shared(int k) const {
    return qs_[static_cast<std::size_t>(k)];
  }
  int IndexOf(const std::string& id) const;

  // Component weights for a distribution over (a subset of) these ids;
  // throws InvalidArgument for an id without a component.
  std::vector<double> Align(const MixedStrategy& sigma) const;

  // Q_k(obs, .) for every component, row-major K x A.
  void Values(const envs::Observation& obs, std::vector<double>& out) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::shared_ptr<const qlearn::QFunction>> qs_;
  int num_actions_ = 0;
  int observation_size_ = 0;
};

// The opponent belief psi has the same invariants as a mixed strategy.
using OpponentBelief = MixedStrategy;

// sum_k weights[k] * values[k, .] for a row-major K x A matrix.
std::vector<double> MixRows(std::span<const double> values,
                            std::span<const double> weights, int num_actions);

// Q(obs, .|sigma) = sum_k sigma_k Q_k(obs, .).
std::vector<double> MixQPrior(const envs::Observation& obs,
                              const ComponentSet& comps,
                              const MixedStrategy& sigma);

// psi_k proportional to prior_k * evidence_k; the prior itself when every
// product is zero. Throws InvalidArgument on negative or non-finite evidence.
OpponentBelief BeliefFromEvidence(const MixedStrategy& prior,
                                  std::span<const double> evidence);

std::vector<double> MixQWithBelief(const envs::Observation& obs,
                                   const ComponentSet& comps,
                                   const OpponentBelief& psi);

// Per-opponent likelihoods of an observation, aligned with some id list.
class EvidenceSource {
 public:
  virtual ~EvidenceSource() = default;
  virtual const std::vector<std::string>& ids() const = 0;
  virtual std::vector<double> Evidence(
      const envs::Observation& obs,
      const qlearn::EpisodeContext& context) const = 0;
};

// Test oracle: all evidence on the opponent actually being played.
class TrueLabelEvidence final : public EvidenceSource {
 public:
  explicit TrueLabelEvidence(std::vector<std::string> ids)
      : ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const override { return ids_; }
  std::vector<double> Evidence(
      const envs::Observation& obs,
      const qlearn::EpisodeContext& context) const override;

 private:
  std::vector<std::string> ids_;
};

// Greedy policy of Q-Mixing-Prior.
class QMixPriorAgent final : public qlearn::Agent {
 public:
  QMixPriorAgent(std::shared_ptr<const ComponentSet> comps,
                 const MixedStrategy& sigma);
  int Act(const envs::Observation& obs,
          const qlearn::EpisodeContext& context) const override;
  std::vector<double> Values(const envs::Observation& obs) const;

 private:
  std::shared_ptr<const ComponentSet> comps_;
  std::vector<double> weights_;
};

// Greedy policy of belief-weighted mixing with psi from an evidence source
// combined with the prior sigma.
class QMixBeliefAgent final : public qlearn::Agent {
 public:
  QMixBeliefAgent(std::shared_ptr<const ComponentSet> comps,
                  const MixedStrategy& sigma,
                  std::shared_ptr<const EvidenceSource> evidence);
  int Act(const envs::Observation& obs,
          const qlearn::EpisodeContext& context) const override;
  std::vector<double> Values(const envs::Observation& obs,
                             const qlearn::EpisodeContext& context) const;

 private:
  std::shared_ptr<const ComponentSet> comps_;
  std::shared_ptr<const EvidenceSource> evidence_;
  MixedStrategy prior_;  // over the component ids
  std::vector<int> evidence_index_;  // component k -> evidence slot
};

}  // namespace qmixlab::qmix

#endif  // QMIXLAB_QMIX_MIXING_H_
