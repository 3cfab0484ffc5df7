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

#ifndef QMIXLAB_DISTILL_DISTILL_H_
#define QMIXLAB_DISTILL_DISTILL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qmixlab/envs/environment.h"
#include "qmixlab/qlearn/qfunction.h"
#include "qmixlab/qlearn/replay_buffer.h"
#include "qmixlab/qmix/mixing.h"

namespace qmixlab::distill {

// p_a proportional to exp(q_a / tau). Throws InvalidArgument for tau <= 0
// or non-finite q.
std::vector<double> SoftmaxTemperature(std::span<const double> q, double tau);

// KL(softmax(q_teacher/tau) || softmax(q_student/tau)).
double DistillLoss(std::span<const double> q_teacher,
                   std::span<const double> q_student, double tau);

// Same loss; writes dL/dq_student = (p_student - p_teacher) / tau into grad
// with the teacher held constant.
double DistillLossGradient(std::span<const double> q_teacher,
                           std::span<const double> q_student, double tau,
                           std::span<double> grad);

// Teacher action values for an observation.
using Teacher = std::function<std::vector<double>(const envs::Observation&)>;

// Q-Mixing-Prior over the components with weights sigma.
Teacher PriorTeacher(std::shared_ptr<const qmix::ComponentSet> comps,
                     const qmix::MixedStrategy& sigma);

struct DistillConfig {
  double temperature = 1.0;
  double learning_rate = 0.003;
  int batch_size = 64;
  int epochs = 10;
  std::vector<int> hidden = {50, 50};
  // Share of the observations held out for the agreement metric.
  double held_out_fraction = 0.1;
  uint64_t seed = 0;

  void Validate() const;
};

struct CurvePoint {
  int epoch;  // 0 is the untrained student
  double mean_return;
};

struct DistillResult {
  qlearn::QFunction student;
  std::vector<double> train_loss;  // mean KL per epoch
  double held_out_agreement = 0.0;
  std::size_t train_points = 0;
  std::size_t held_out_points = 0;
  std::vector<CurvePoint> curve;
};

// The student before any update: a one-component-size MLP drawn from the
// config seed.
qlearn::QFunction InitialStudent(int observation_size, int num_actions,
                                 const DistillConfig& config);

// Fraction of observations where the greedy actions agree.
double GreedyAgreement(const qlearn::QFunction& student, const Teacher& teacher,
                       const std::vector<envs::Observation>& observations);

// Distills the teacher into a fresh student using the observations of the
// concatenated buffers: a seeded held-out split, then Adam on the mean
// distillation loss over minibatches of the rest. `evaluate`, when set, is
// called before training and after every epoch to trace simulated return.
// Throws InvalidArgument when every buffer is empty.
DistillResult TrainStudent(
    const Teacher& teacher, int num_actions,
    const std::vector<const qlearn::ReplayBuffer*>& buffers,
    const DistillConfig& config,
    const std::function<double(const qlearn::QFunction&)>& evaluate = {});

}  // namespace qmixlab::distill

#endif  // QMIXLAB_DISTILL_DISTILL_H_
