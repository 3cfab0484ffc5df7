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

#include "qmixlab/cli/commands.h"

#include <cinttypes>
#include <cstdio>
#include <filesystem>

#include "json.hpp"
#include "qmixlab/common/error.h"
#include "qmixlab/common/io.h"
#include "qmixlab/distill/distill.h"
#include "qmixlab/eval/coverage.h"
#include "qmixlab/opc/classifier.h"
#include "qmixlab/opc/dataset.h"
#include "qmixlab/qlearn/model_io.h"
#include "qmixlab/qlearn/opponents.h"
#include "qmixlab/qlearn/train.h"
#include "qmixlab/qmix/qmvi.h"

namespace qmixlab::cli {
namespace {

namespace fs = std::filesystem;

void Log(const Context& ctx, const std::string& line) {
  if (ctx.log != nullptr) *ctx.log << line << std::endl;
}

std::string G(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string Hex(uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
  return buf;
}

std::string In(const ExperimentConfig& c, const std::string& file) {
  return (fs::path(c.output_dir) / file).string();
}

// Fails before any work if an output would be replaced without --force.
void CheckFresh(const Context& ctx, const std::vector<std::string>& paths) {
  if (ctx.force) return;
  for (const std::string& p : paths) {
    if (fs::exists(p)) {
      throw InvalidArgument("refusing to overwrite '" + p + "' (pass --force)");
    }
  }
}

void CheckPresent(const std::vector<std::string>& paths,
                  const std::string& hint) {
  std::string missing;
  for (const std::string& p : paths) {
    if (!fs::exists(p)) missing += "\n  " + p;
  }
  if (!missing.empty()) {
    throw MissingArtifact("missing artifacts (" + hint + "):" + missing);
  }
}

void MakeOutputDir(const ExperimentConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) {
    throw MissingArtifact("cannot create output directory '" + c.output_dir +
                          "': " + ec.message());
  }
}

// Per-seed means of an agent against sigma, using the configured seeds.
std::vector<double> SeedMeans(const ExperimentConfig& c,
                              const envs::Environment& env,
                              const qlearn::Agent& agent,
                              const envs::OpponentPool& pool,
                              const qmix::MixedStrategy& sigma) {
  std::vector<double> means;
  for (uint64_t seed : c.EvalSeedList()) {
    means.push_back(
        qlearn::EvaluateAgent(env, agent, pool, sigma, c.eval_episodes, seed).mean);
  }
  return means;
}

eval::ConfidenceInterval Interval(const std::vector<double>& means) {
  if (means.size() >= 2) return eval::MakeConfidenceInterval(means);
  eval::ConfidenceInterval ci;
  ci.mean = means.empty() ? 0.0 : means.front();
  ci.n = static_cast<int>(means.size());
  return ci;
}

double Mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

std::shared_ptr<const opc::Classifier> LoadClassifier(const ExperimentConfig& c) {
  const std::string path = ClassifierPath(c);
  CheckPresent({path}, "mode opc needs a classifier; run `qmixlab opc` first");
  return std::make_shared<const opc::Classifier>(
      opc::Classifier::FromDocument(qlearn::LoadModel(path)));
}

std::vector<qlearn::ReplayBuffer> LoadPureBuffers(
    const ExperimentConfig& c, const std::vector<std::string>& ids,
    const std::string& hint) {
  std::vector<std::string> paths;
  for (const std::string& id : ids) paths.push_back(ReplayPath(c, StemOf(id)));
  CheckPresent(paths, hint);
  std::vector<qlearn::ReplayBuffer> out;
  for (const std::string& p : paths) out.push_back(qlearn::LoadReplay(p).buffer);
  return out;
}

}  // namespace

std::string StemOf(const std::string& id) {
  std::string out;
  for (char ch : id) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' ||
                      ch == '.';
    out += keep ? ch : '_';
  }
  return out;
}

Target ResolveTarget(const std::string& arg,
                     const std::vector<std::string>& ids) {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] == arg) {
      return {qmix::MixedStrategy::PointMass(ids, static_cast<int>(k)),
              StemOf(arg), true};
    }
  }
  if (arg == "uniform") return {qmix::MixedStrategy::Uniform(ids), "uniform", false};
  if (arg.find(',') == std::string::npos && arg.find('=') == std::string::npos) {
    std::string known;
    for (const std::string& id : ids) known += " " + id;
    throw InvalidArgument("unknown opponent '" + arg + "' (known:" + known +
                          "; or 'uniform' or a mixture literal)");
  }
  qmix::MixedStrategy sigma = qmix::MixedStrategy::Parse(arg, ids);
  std::string stem = "mix";
  for (double w : sigma.weights()) stem += "_" + G(w);
  return {std::move(sigma), stem, false};
}

std::string ModelPath(const ExperimentConfig& c, const std::string& stem) {
  return In(c, "br_" + stem + ".model.json");
}

std::string ReplayPath(const ExperimentConfig& c, const std::string& stem) {
  return In(c, "br_" + stem + ".replay.jsonl");
}

std::string ClassifierPath(const ExperimentConfig& c) {
  return In(c, "opc.model.json");
}

std::shared_ptr<const qmix::ComponentSet> LoadComponents(
    const ExperimentConfig& c, const envs::Environment& env) {
  const std::vector<std::string> ids = c.OpponentIds();
  std::vector<std::string> paths;
  for (const std::string& id : ids) paths.push_back(ModelPath(c, StemOf(id)));
  CheckPresent(paths, "run `qmixlab train-br` for each opponent first");
  std::vector<std::shared_ptr<const qlearn::QFunction>> qs;
  for (const std::string& p : paths) {
    auto q = std::make_shared<const qlearn::QFunction>(
        qlearn::QFunctionFromDocument(qlearn::LoadModel(p)));
    if (q->observation_size() != env.observation_size() ||
        q->num_actions() != env.num_actions()) {
      throw InvalidArgument(
          "model " + p + " has observation size " +
          std::to_string(q->observation_size()) + " and " +
          std::to_string(q->num_actions()) + " actions; environment '" +
          env.name() + "' has observation size " +
          std::to_string(env.observation_size()) + " and " +
          std::to_string(env.num_actions()) + " actions");
    }
    qs.push_back(std::move(q));
  }
  return std::make_shared<const qmix::ComponentSet>(ids, std::move(qs));
}

TrainBrOutput CmdTrainBr(const Context& ctx, const std::string& opponent) {
  const ExperimentConfig& c = ctx.config;
  const std::unique_ptr<envs::Environment> env = c.MakeEnvironment();
  const std::vector<std::string> ids = c.OpponentIds();
  const Target target = ResolveTarget(opponent, ids);
  TrainBrOutput out{ModelPath(c, target.stem), ReplayPath(c, target.stem),
                    In(c, "br_" + target.stem + ".curve.csv")};
  CheckFresh(ctx, {out.model, out.replay, out.curve});
  MakeOutputDir(c);
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(*env, ids);

  qlearn::TrainConfig tc = c.train;
  tc.timesteps = target.pure ? c.PureTimesteps() : c.train.timesteps;
  tc.seed = DeriveSeed(c.seed, {HashString("train-br"), HashString(target.stem)});
  const uint64_t curve_seed =
      DeriveSeed(c.seed, {HashString("curve"), HashString(target.stem)});
  Log(ctx, "train-br " + target.stem + ": " + std::to_string(tc.timesteps) +
               " steps against " + target.sigma.ToString());

  std::string curve = "steps,mean_return\n";
  qlearn::TrainCheckpoint checkpoint;
  checkpoint.interval = 5000;
  checkpoint.fn = [&](int64_t steps, const qlearn::QFunction& q) {
    const qlearn::GreedyQAgent agent(std::make_shared<const qlearn::QFunction>(q));
    const double mean = qlearn::EvaluateAgent(*env, agent, pool, target.sigma,
                                              c.eval_episodes, curve_seed)
                            .mean;
    curve += std::to_string(steps) + "," + G(mean) + "\n";
    Log(ctx, "  step " + std::to_string(steps) + " return " + G(mean));
  };
  const qlearn::TrainResult r =
      qlearn::TrainBestResponse(*env, pool, target.sigma, tc, checkpoint);

  qlearn::ModelDocument doc = qlearn::QFunctionDocument(r.q);
  doc.config = qlearn::TrainConfigToJson(tc);
  doc.provenance = {{"command", "train-br"},
                    {"env", c.env},
                    {"opponent", opponent},
                    {"mixture", target.sigma.ToString()},
                    {"base_seed", c.seed}};
  qlearn::SaveModel(out.model, doc, ctx.force);
  qlearn::SaveReplay(out.replay, r.buffer, ids, ctx.force);
  WriteFileAtomic(out.curve, curve, ctx.force);
  return out;
}

void CmdTrainAll(const Context& ctx) {
  for (const std::string& id : ctx.config.OpponentIds()) CmdTrainBr(ctx, id);
  CmdTrainBr(ctx, "uniform");
}

std::vector<std::string> CmdQmixEval(const Context& ctx,
                                     const QmixEvalRequest& request) {
  const ExperimentConfig& c = ctx.config;
  if (request.mode != "prior" && request.mode != "opc") {
    throw InvalidArgument("qmix-eval: mode must be prior or opc, got '" +
                          request.mode + "'");
  }
  if (request.coverage == !request.mixture.empty()) {
    throw InvalidArgument("qmix-eval: pass exactly one of --mixture and --coverage");
  }
  const std::unique_ptr<envs::Environment> env = c.MakeEnvironment();
  const std::vector<std::string> ids = c.OpponentIds();
  const auto comps = LoadComponents(c, *env);
  std::shared_ptr<const qmix::EvidenceSource> evidence;
  if (request.mode == "opc") {
    evidence = std::make_shared<const opc::ClassifierEvidence>(LoadClassifier(c));
  }
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(*env, ids);
  auto make_agent = [comps, evidence](const qmix::MixedStrategy& sigma)
      -> std::shared_ptr<const qlearn::Agent> {
    if (evidence) {
      return std::make_shared<const qmix::QMixBeliefAgent>(comps, sigma, evidence);
    }
    return std::make_shared<const qmix::QMixPriorAgent>(comps, sigma);
  };
  const std::string method = "qmix_" + request.mode;

  if (!request.coverage) {
    const Target target = ResolveTarget(request.mixture, ids);
    const std::string path = In(c, method + "_" + target.stem + ".csv");
    CheckFresh(ctx, {path});
    MakeOutputDir(c);
    const auto agent = make_agent(target.sigma);
    const std::vector<double> means = SeedMeans(c, *env, *agent, pool, target.sigma);
    std::string csv = "method,mixture,seed,mean_return\n";
    const std::vector<uint64_t> seeds = c.EvalSeedList();
    for (std::size_t s = 0; s < means.size(); ++s) {
      csv += method + ",\"" + target.sigma.ToString() + "\"," +
             std::to_string(seeds[s]) + "," + G(means[s]) + "\n";
    }
    WriteFileAtomic(path, csv, ctx.force);
    const eval::ConfidenceInterval ci = Interval(means);
    Log(ctx, method + " vs " + target.sigma.ToString() + ": " + G(ci.mean) +
                 " +- " + G(ci.half_width));
    return {path};
  }

  const std::string prefix = In(c, "coverage_" + request.mode);
  CheckFresh(ctx, {prefix + "_per_seed.csv", prefix + "_sorted.csv"});
  std::vector<eval::SweepMethod> methods;
  methods.push_back({method, {}, [make_agent](std::size_t, const qmix::MixedStrategy& s) {
                       return make_agent(s);
                     }});
  for (const std::string& stem : request.baselines) {
    const std::string path = ModelPath(c, stem);
    CheckPresent({path}, "baseline BR for --baseline " + stem);
    auto q = std::make_shared<const qlearn::QFunction>(
        qlearn::QFunctionFromDocument(qlearn::LoadModel(path)));
    methods.push_back({"br_" + stem, {std::make_shared<qlearn::GreedyQAgent>(q)}, {}});
  }
  eval::SweepConfig sweep;
  sweep.episodes = c.eval_episodes;
  sweep.seeds = c.EvalSeedList();
  sweep.threads = c.threads;
  const eval::MixtureGrid grid = eval::EnumerateMixtures(ids, c.grid_step);
  Log(ctx, "coverage: " + std::to_string(methods.size()) + " methods x " +
               std::to_string(grid.size()) + " mixtures x " +
               std::to_string(sweep.seeds.size()) + " seeds");
  MakeOutputDir(c);
  const eval::CoverageReport report =
      eval::CoverageSweep(*env, methods, pool, grid, sweep);
  eval::EmitReport(report, prefix, ctx.force);
  for (std::size_t m = 0; m < report.methods.size(); ++m) {
    Log(ctx, "  " + report.methods[m] + " grid average " +
                 G(report.GridAverage(static_cast<int>(m))));
  }
  return {prefix + "_per_seed.csv", prefix + "_sorted.csv"};
}

std::vector<std::string> CmdQmvi(const Context& ctx, const std::string& mixture) {
  const ExperimentConfig& c = ctx.config;
  const std::unique_ptr<envs::Environment> env = c.MakeEnvironment();
  if (env->enumerable() == nullptr) {
    throw InvalidArgument("qmvi: kernel requires tabular env ('" + env->name() +
                          "' cannot enumerate its states)");
  }
  const std::vector<std::string> ids = c.OpponentIds();
  const Target target = ResolveTarget(mixture, ids);
  const std::string base = In(c, "qmvi_" + target.stem);
  const std::vector<std::string> paths{base + ".json", base + "_residuals.csv",
                                       base + "_eval.csv"};
  CheckFresh(ctx, paths);
  MakeOutputDir(c);
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(*env, ids);

  std::string residuals = "iteration,residual\n";
  const qmix::MixtureQmvi solved = qmix::SolveMixtureQmvi(
      *env, pool, target.sigma, c.qmvi, c.occupancy_episodes,
      c.occupancy_smoothing, DeriveSeed(c.seed, {HashString("occupancy")}),
      [&](int it, double r) {
        residuals += std::to_string(it) + "," + G(r) + "\n";
        Log(ctx, "  iteration " + std::to_string(it) + " residual " + G(r));
      });
  Log(ctx, "qmvi converged in " + std::to_string(solved.mixed.iterations) +
               " iterations");

  // Direct BR to the mixture for reference: the same backup with psi fixed
  // at sigma in every state.
  const int num_states = env->enumerable()->NumStates();
  std::vector<double> flat;
  for (int s = 0; s < num_states; ++s) {
    for (double w : target.sigma.weights()) flat.push_back(w);
  }
  const qmix::QmviResult direct =
      qmix::QmviSolve(solved.kernels, flat, nullptr, c.qmvi);

  const qmix::TablePolicyAgent agent(env->enumerable(), solved.mixed.policy);
  std::string eval_csv =
      "target,qmvi_return,qmvi_ci_halfwidth,br_return,br_ci_halfwidth\n";
  std::vector<qmix::MixedStrategy> targets;
  for (int k = 0; k < pool.size(); ++k) {
    targets.push_back(qmix::MixedStrategy::PointMass(ids, k));
  }
  targets.push_back(target.sigma);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::vector<int>& br_policy =
        t < solved.components.size() ? solved.components[t].policy : direct.policy;
    const qmix::TablePolicyAgent br(env->enumerable(), br_policy);
    const auto q = Interval(SeedMeans(c, *env, agent, pool, targets[t]));
    const auto b = Interval(SeedMeans(c, *env, br, pool, targets[t]));
    eval_csv += "\"" + targets[t].ToString() + "\"," + G(q.mean) + "," +
                G(q.half_width) + "," + G(b.mean) + "," + G(b.half_width) + "\n";
    Log(ctx, "  vs " + targets[t].ToString() + ": qmvi " + G(q.mean) + ", br " +
                 G(b.mean));
  }

  nlohmann::json doc = {{"mixture", target.sigma.ToString()},
                        {"gamma", c.qmvi.gamma},
                        {"iterations", solved.mixed.iterations},
                        {"num_states", num_states},
                        {"num_actions", env->num_actions()},
                        {"v", solved.mixed.v},
                        {"q", solved.mixed.q},
                        {"policy", solved.mixed.policy}};
  WriteFileAtomic(paths[0], doc.dump() + "\n", ctx.force);
  WriteFileAtomic(paths[1], residuals, ctx.force);
  WriteFileAtomic(paths[2], eval_csv, ctx.force);
  return paths;
}

std::vector<std::string> CmdOpc(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const std::vector<std::string> ids = c.OpponentIds();
  const std::string model = ClassifierPath(c);
  const std::string curve = In(c, "opc_curve.csv");
  CheckFresh(ctx, {model, curve});
  const std::vector<qlearn::ReplayBuffer> buffers = LoadPureBuffers(
      c, ids, "the classifier trains on the pure-opponent BR buffers");
  std::vector<const qlearn::ReplayBuffer*> ptrs;
  for (const auto& b : buffers) ptrs.push_back(&b);
  const opc::LabeledDataset ds =
      opc::BuildDataset(ptrs, ids, DeriveSeed(c.seed, {HashString("opc")}));

  opc::Classifier classifier;
  std::string csv = "epoch,train_loss,validation_loss,validation_accuracy\n";
  nlohmann::json provenance = {{"command", "opc"},
                               {"kind", c.opc_kind},
                               {"train_points", ds.train.size()},
                               {"validation_points", ds.validation.size()}};
  if (c.opc_kind == "tabular") {
    classifier = opc::TrainTabularClassifier(ds);
    csv += "0,," + G(opc::CrossEntropy(classifier, ds, ds.validation)) + "," +
           G(opc::ValidationAccuracy(classifier, ds)) + "\n";
  } else {
    opc::ClassifierConfig cc = c.opc;
    cc.seed = DeriveSeed(c.seed, {HashString("opc"), 1});
    const opc::ClassifierTraining t = opc::TrainClassifier(ds, cc);
    for (std::size_t e = 0; e < t.train_loss.size(); ++e) {
      csv += std::to_string(e + 1) + "," + G(t.train_loss[e]) + "," +
             G(t.validation_loss[e]) + "," + G(t.validation_accuracy[e]) + "\n";
    }
    provenance["best_epoch"] = t.best_epoch + 1;
    classifier = t.classifier;
  }
  const double accuracy = opc::ValidationAccuracy(classifier, ds);
  provenance["validation_accuracy"] = accuracy;
  Log(ctx, "opc: validation accuracy " + G(accuracy) + " (chance " +
               G(1.0 / static_cast<double>(ids.size())) + ")");
  MakeOutputDir(c);
  qlearn::ModelDocument doc = classifier.ToDocument();
  doc.provenance = provenance;
  qlearn::SaveModel(model, doc, ctx.force);
  WriteFileAtomic(curve, csv, ctx.force);
  return {model, curve};
}

std::vector<std::string> CmdDistill(const Context& ctx,
                                    const std::string& mixture,
                                    const std::vector<double>& temperatures) {
  const ExperimentConfig& c = ctx.config;
  const std::unique_ptr<envs::Environment> env = c.MakeEnvironment();
  const std::vector<std::string> ids = c.OpponentIds();
  const Target target = ResolveTarget(mixture.empty() ? "uniform" : mixture, ids);
  std::vector<double> taus = temperatures;
  if (taus.empty()) taus.push_back(c.distill.temperature);

  std::vector<std::string> outputs;
  for (double tau : taus) {
    const std::string base = In(c, "student_" + target.stem + "_tau" + G(tau));
    outputs.push_back(base + ".model.json");
    outputs.push_back(base + ".curve.csv");
  }
  const std::string summary = In(c, "distill_" + target.stem + "_summary.csv");
  outputs.push_back(summary);
  CheckFresh(ctx, outputs);

  const auto comps = LoadComponents(c, *env);
  const std::vector<qlearn::ReplayBuffer> buffers = LoadPureBuffers(
      c, ids, "distillation replays the pure-opponent BR buffers");
  std::vector<const qlearn::ReplayBuffer*> ptrs;
  for (const auto& b : buffers) ptrs.push_back(&b);
  nlohmann::json teachers = nlohmann::json::array();
  for (const std::string& id : ids) {
    const std::string path = ModelPath(c, StemOf(id));
    teachers.push_back({{"opponent", id},
                        {"path", fs::path(path).filename().string()},
                        {"fnv1a64", Hex(HashString(ReadFile(path)))}});
  }
  const envs::OpponentPool pool = qlearn::MakeOpponentPool(*env, ids);
  const distill::Teacher teacher = distill::PriorTeacher(comps, target.sigma);
  const qmix::QMixPriorAgent teacher_agent(comps, target.sigma);
  const eval::ConfidenceInterval teacher_ci =
      Interval(SeedMeans(c, *env, teacher_agent, pool, target.sigma));
  Log(ctx, "teacher vs " + target.sigma.ToString() + ": " + G(teacher_ci.mean) +
               " +- " + G(teacher_ci.half_width));

  std::string summary_csv =
      "temperature,held_out_agreement,student_return,student_ci_halfwidth,"
      "teacher_return,teacher_ci_halfwidth\n";
  MakeOutputDir(c);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    distill::DistillConfig dc = c.distill;
    dc.temperature = taus[i];
    dc.seed = DeriveSeed(c.seed, {HashString("distill")});
    const distill::DistillResult r = distill::TrainStudent(
        teacher, env->num_actions(), ptrs, dc,
        [&](const qlearn::QFunction& student) {
          const qlearn::GreedyQAgent a(
              std::make_shared<const qlearn::QFunction>(student));
          return Mean(SeedMeans(c, *env, a, pool, target.sigma));
        });
    std::string curve = "epoch,train_loss,mean_return\n";
    for (const distill::CurvePoint& p : r.curve) {
      curve += std::to_string(p.epoch) + "," +
               (p.epoch == 0 ? std::string()
                             : G(r.train_loss[static_cast<std::size_t>(p.epoch - 1)])) +
               "," + G(p.mean_return) + "\n";
    }
    const qlearn::GreedyQAgent student(
        std::make_shared<const qlearn::QFunction>(r.student));
    const eval::ConfidenceInterval s_ci =
        Interval(SeedMeans(c, *env, student, pool, target.sigma));
    Log(ctx, "student tau " + G(taus[i]) + ": agreement " +
                 G(r.held_out_agreement) + ", return " + G(s_ci.mean));
    summary_csv += G(taus[i]) + "," + G(r.held_out_agreement) + "," +
                   G(s_ci.mean) + "," + G(s_ci.half_width) + "," +
                   G(teacher_ci.mean) + "," + G(teacher_ci.half_width) + "\n";

    qlearn::ModelDocument doc = qlearn::QFunctionDocument(r.student);
    doc.config = {{"temperature", dc.temperature},
                  {"learning_rate", dc.learning_rate},
                  {"batch_size", dc.batch_size},
                  {"epochs", dc.epochs},
                  {"hidden", dc.hidden},
                  {"held_out_fraction", dc.held_out_fraction}};
    doc.provenance = {{"command", "distill"},
                      {"mixture", target.sigma.ToString()},
                      {"teachers", teachers},
                      {"held_out_agreement", r.held_out_agreement},
                      {"base_seed", c.seed}};
    qlearn::SaveModel(outputs[2 * i], doc, ctx.force);
    WriteFileAtomic(outputs[2 * i + 1], curve, ctx.force);
  }
  WriteFileAtomic(summary, summary_csv, ctx.force);
  return outputs;
}

void CmdBench(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  Log(ctx, "bench-" + c.env + ": writing to " + c.output_dir);
  MakeOutputDir(c);
  WriteFileAtomic(In(c, "bench_config.ini"), ConfigToIni(c), ctx.force);
  CmdTrainAll(ctx);
  if (c.MakeEnvironment()->enumerable() != nullptr) CmdQmvi(ctx, "uniform");
  CmdOpc(ctx);
  CmdDistill(ctx, "uniform", {});
  CmdQmixEval(ctx, QmixEvalRequest{"prior", "", true, {"uniform"}});
  CmdQmixEval(ctx, QmixEvalRequest{"opc", "", true, {}});
}

}  // namespace qmixlab::cli
