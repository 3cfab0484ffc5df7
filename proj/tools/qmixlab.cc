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

// qmixlab: trains best responses, mixes them and sweeps opponent mixtures.
//
//   qmixlab train-br --opponent chaser
//   qmixlab qmix-eval --mode prior --coverage
//   qmixlab bench-soccer --config configs/soccer_desk.ini
//
// Settings come from the defaults of the environment, then --config (INI),
// then QMIXLAB_SEED, then --set key=value and --<key> flags.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmixlab/cli/commands.h"
#include "qmixlab/cli/config.h"
#include "qmixlab/common/error.h"
#include "qmixlab/simd/kernels.h"

namespace {

using qmixlab::cli::ConfigKeys;

struct GlobalFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> keys;  // --<key> flags as given
  bool force = false;
  bool quiet = false;
};

std::map<std::string, std::string> CollectValues(const GlobalFlags& flags,
                                                 const std::string& env) {
  std::map<std::string, std::string> values;
  if (!flags.config_file.empty()) {
    values = qmixlab::cli::ReadIniFile(flags.config_file);
  }
  qmixlab::cli::ApplyEnvironmentOverrides(values);
  for (const std::string& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw qmixlab::InvalidArgument("--set expects key=value, got '" + kv + "'");
    }
    values[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const auto& [k, v] : flags.keys) values[k] = v;
  if (!env.empty()) {
    const auto it = values.find("env");
    if (it != values.end() && it->second != env) {
      throw qmixlab::InvalidArgument("bench-" + env + " cannot run with env = " +
                                     it->second);
    }
    values["env"] = env;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-mixing best responses against opponent mixtures", "qmixlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Defaults shown are the soccer settings; env = commons switches the "
      "train.* defaults to the commons settings.\n"
      "Environment: QMIXLAB_SEED overrides seed, QMIXLAB_THREADS sets the "
      "worker count, QMIXLAB_SIMD=scalar forces the reference kernels.\n"
      "Exit codes: 0 success, 2 configuration error, 3 missing artifact, "
      "4 numerical failure.");

  GlobalFlags flags;
  app.add_option("--config", flags.config_file, "INI file with config keys");
  app.add_option("--set", flags.sets, "key=value override (repeatable)");
  app.add_flag("--force", flags.force, "replace existing artifacts");
  app.add_flag("-q,--quiet", flags.quiet, "no progress output");

  const qmixlab::cli::ExperimentConfig soccer =
      qmixlab::cli::DefaultConfig("soccer");
  for (const auto& key : ConfigKeys()) {
    const std::string name = key.name;
    app.add_option_function<std::string>(
           "--" + name,
           [&flags, name](const std::string& v) { flags.keys[name] = v; },
           key.help + " [default: " + key.get(soccer) + "]")
        ->group("Config keys");
  }

  std::string opponent;
  auto* train = app.add_subcommand("train-br", "train a best response");
  train->add_option("--opponent", opponent,
                    "opponent id, 'uniform', or a mixture literal "
                    "(w0,w1,... or id=w,...)");
  bool train_all = false;
  train->add_flag("--all", train_all,
                  "train every pure-opponent BR and BR(uniform)");

  qmixlab::cli::QmixEvalRequest eval_request;
  auto* qeval = app.add_subcommand("qmix-eval", "evaluate Q-mixing");
  qeval->add_option("--mode", eval_request.mode, "prior or opc")
      ->check(CLI::IsMember({"prior", "opc"}))
      ->capture_default_str();
  qeval->add_option("--mixture", eval_request.mixture, "single mixture to evaluate");
  qeval->add_flag("--coverage", eval_request.coverage,
                  "sweep the mixture grid");
  qeval->add_option("--baseline", eval_request.baselines,
                    "BR stem added to the sweep, e.g. uniform (repeatable)");

  std::string qmvi_mixture = "uniform";
  auto* qmvi = app.add_subcommand("qmvi", "Q-mixing value iteration (soccer)");
  qmvi->add_option("--mixture", qmvi_mixture, "opponent mixture")
      ->capture_default_str();

  auto* opc = app.add_subcommand("opc", "train the opponent classifier");

  std::string distill_mixture = "uniform";
  std::vector<double> taus;
  auto* distill = app.add_subcommand("distill", "distill Q-Mixing-Prior");
  distill->add_option("--mixture", distill_mixture, "teacher mixture")
      ->capture_default_str();
  distill->add_option("--tau", taus,
                      "temperature; repeat for a sweep with one student each");

  auto* bench_soccer =
      app.add_subcommand("bench-soccer", "full soccer pipeline");
  auto* bench_commons =
      app.add_subcommand("bench-commons", "full commons pipeline");
  auto* show = app.add_subcommand("show-config", "print the resolved config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(qmixlab::ExitCode::kConfigError);
  }

  try {
    std::string bench_env;
    if (bench_soccer->parsed()) bench_env = "soccer";
    if (bench_commons->parsed()) bench_env = "commons";
    qmixlab::cli::Context ctx;
    ctx.config = qmixlab::cli::ResolveConfig(CollectValues(flags, bench_env));
    ctx.force = flags.force;
    ctx.log = flags.quiet ? nullptr : &std::cerr;
    if (ctx.log != nullptr) {
      *ctx.log << "simd: "
               << qmixlab::simd::IsaName(qmixlab::simd::Kernels().isa) << "\n";
    }

    if (train->parsed()) {
      if (train_all == !opponent.empty()) {
        throw qmixlab::InvalidArgument("train-br: pass exactly one of --opponent and --all");
      }
      if (train_all) {
        qmixlab::cli::CmdTrainAll(ctx);
      } else {
        const auto out = qmixlab::cli::CmdTrainBr(ctx, opponent);
        std::cout << out.model << "\n" << out.replay << "\n" << out.curve << "\n";
      }
    } else if (qeval->parsed()) {
      for (const auto& p : qmixlab::cli::CmdQmixEval(ctx, eval_request)) {
        std::cout << p << "\n";
      }
    } else if (qmvi->parsed()) {
      for (const auto& p : qmixlab::cli::CmdQmvi(ctx, qmvi_mixture)) {
        std::cout << p << "\n";
      }
    } else if (opc->parsed()) {
      for (const auto& p : qmixlab::cli::CmdOpc(ctx)) std::cout << p << "\n";
    } else if (distill->parsed()) {
      for (const auto& p : qmixlab::cli::CmdDistill(ctx, distill_mixture, taus)) {
        std::cout << p << "\n";
      }
    } else if (bench_soccer->parsed() || bench_commons->parsed()) {
      qmixlab::cli::CmdBench(ctx);
    } else if (show->parsed()) {
      std::cout << qmixlab::cli::ConfigToIni(ctx.config);
    }
  } catch (const qmixlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
