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

#include "qmixlab/distill/distill.h"

#include <algorithm>
#include <cmath>

#include "qmixlab/common/error.h"
#include "qmixlab/common/random.h"
#include "qmixlab/qlearn/adam.h"
#include "qmixlab/qlearn/mlp.h"

namespace qmixlab::distill {

std::vector<double> SoftmaxTemperature(std::span<const double> q, double tau) {
  return qlearn::Softmax(q, tau);
}

double DistillLossGradient(std::span<const double> q_teacher,
                           std::span<const double> q_student, double tau,
                           std::span<double> grad) {
  if (q_teacher.size() != q_student.size()) {
    throw InvalidArgument("distill loss: teacher has " +
                          std::to_string(q_teacher.size()) +
                          " values, student " +
                          std::to_string(q_student.size()));
  }
  const std::vector<double> pt = SoftmaxTemperature(q_teacher, tau);
  const std::vector<double> ps = SoftmaxTemperature(q_student, tau);
  // ln(pt/ps) from the logits directly, so tiny probabilities keep their
  // precision: ln pt_a - ln ps_a = (t_a - s_a)/tau - lse_t + lse_s.
  const double t_max = *std::max_element(q_teacher.begin(), q_teacher.end());
  const double s_max = *std::max_element(q_student.begin(), q_student.end());
  double zt = 0.0, zs = 0.0;
  for (std::size_t a = 0; a < pt.size(); ++a) {
    zt += std::exp((q_teacher[a] - t_max) / tau);
    zs += std::exp((q_student[a] - s_max) / tau);
  }
  const double lse_t = t_max / tau + std::log(zt);
  const double lse_s = s_max / tau + std::log(zs);
  double loss = 0.0;
  for (std::size_t a = 0; a < pt.size(); ++a) {
    if (pt[a] == 0.0) continue;
    loss += pt[a] * ((q_teacher[a] - q_student[a]) / tau - lse_t + lse_s);
  }
  if (!grad.empty()) {
    if (grad.size() != ps.size()) {
      throw InvalidArgument("distill loss: gradient buffer has wrong size");
    }
    for (std::size_t a = 0; a < ps.size(); ++a) grad[a] = (ps[a] - pt[a]) / tau;
  }
  return std::max(loss, 0.0);
}

double DistillLoss(std::span<const double> q_teacher,
                   std::span<const double> q_student, double tau) {
  return DistillLossGradient(q_teacher, q_student, tau, {});
}

Teacher PriorTeacher(std::shared_ptr<const qmix::ComponentSet> comps,
                     const qmix::MixedStrategy& sigma) {
  auto agent = std::make_shared<qmix::QMixPriorAgent>(std::move(comps), sigma);
  return [agent](const envs::Observation& obs) { return agent->Values(obs); };
}

void DistillConfig::Validate() const {
  if (!(temperature > 0.0)) {
    throw InvalidArgument("distill: temperature must be positive");
  }
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("distill: learning_rate must be positive");
  }
  if (batch_size <= 0) throw InvalidArgument("distill: batch_size must be positive");
  if (epochs < 0) throw InvalidArgument("distill: epochs must be >= 0");
  if (!(held_out_fraction >= 0.0 && held_out_fraction < 1.0)) {
    throw InvalidArgument("distill: held_out_fraction must be in [0, 1)");
  }
}

qlearn::QFunction InitialStudent(int observation_size, int num_actions,
                                 const DistillConfig& config) {
  Rng rng(DeriveSeed(config.seed, {0}));
  return qlearn::QFunction::RandomMlp(observation_size, num_actions,
                                      config.hidden, rng);
}

double GreedyAgreement(const qlearn::QFunction& student, const Teacher& teacher,
                       const std::vector<envs::Observation>& observations) {
  if (observations.empty()) throw InvalidArgument("agreement: no observations");
  std::size_t same = 0;
  for (const envs::Observation& obs : observations) {
    if (qlearn::GreedyAction(student.Values(obs)) ==
        qlearn::GreedyAction(teacher(obs))) {
      ++same;
    }
  }
  return static_cast<double>(same) / static_cast<double>(observations.size());
}

DistillResult TrainStudent(
    const Teacher& teacher, int num_actions,
    const std::vector<const qlearn::ReplayBuffer*>& buffers,
    const DistillConfig& config,
    const std::function<double(const qlearn::QFunction&)>& evaluate) {
  config.Validate();
  std::vector<envs::Observation> all;
  for (const qlearn::ReplayBuffer* b : buffers) {
    if (b == nullptr) continue;
    for (std::size_t i = 0; i < b->size(); ++i) all.push_back((*b)[i].obs);
  }
  if (all.empty()) throw InvalidArgument("distill: buffers are empty");
  const int obs_size = all.front().size;

  Rng split_rng(DeriveSeed(config.seed, {1}));
  Rng batch_rng(DeriveSeed(config.seed, {2}));
  std::shuffle(all.begin(), all.end(), split_rng);
  const std::size_t held = static_cast<std::size_t>(
      std::llround(config.held_out_fraction * static_cast<double>(all.size())));
  const std::vector<envs::Observation> held_out(all.end() - held, all.end());
  all.resize(all.size() - held);

  DistillResult out;
  out.student = InitialStudent(obs_size, num_actions, config);
  out.train_points = all.size();
  out.held_out_points = held_out.size();

  // The teacher is frozen, so its targets are computed once.
  std::vector<std::vector<double>> targets;
  targets.reserve(all.size());
  for (const envs::Observation& obs : all) {
    targets.push_back(teacher(obs));
    if (static_cast<int>(targets.back().size()) != num_actions) {
      throw InvalidArgument("distill: teacher returned " +
                            std::to_string(targets.back().size()) +
                            " values for " + std::to_string(num_actions) +
                            " actions");
    }
  }

  if (evaluate) out.curve.push_back({0, evaluate(out.student)});
  qlearn::Mlp& net = out.student.net();
  qlearn::AdamOptimizer adam(net.num_parameters(),
                             qlearn::AdamConfig{config.learning_rate});
  std::vector<double> grad(net.num_parameters());
  std::vector<double> dout(static_cast<std::size_t>(num_actions));
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  qlearn::Mlp::Trace trace;
  for (int epoch = 1; epoch <= config.epochs && !order.empty(); ++epoch) {
    std::shuffle(order.begin(), order.end(), batch_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double scale = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        net.Forward(all[i], trace);
        epoch_loss += DistillLossGradient(targets[i], trace.post.back(),
                                          config.temperature, dout);
        for (double& g : dout) g *= scale;
        net.Backward(all[i], trace, dout, grad);
      }
      adam.Step(net.parameters(), grad);
    }
    out.train_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    if (evaluate) out.curve.push_back({epoch, evaluate(out.student)});
  }
  if (!held_out.empty()) {
    out.held_out_agreement = GreedyAgreement(out.student, teacher, held_out);
  }
  return out;
}

}  // namespace qmixlab::distill
