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

#include "qmixlab/cli/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "qmixlab/common/error.h"
#include "qmixlab/envs/policy.h"
#include "qmixlab/envs/soccer.h"

namespace qmixlab::cli {
namespace {

constexpr std::string_view kQlearnerPrefix = "qlearner:";

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + text +
                          "'");
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InvalidArgument("config key '" + key + "': expected a boolean, got '" +
                        text + "'");
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> ParseIntList(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (const std::string& s : SplitList(text)) {
    out.push_back(ParseNumber<int>(key, s));
  }
  return out;
}

template <typename T>
std::string Str(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  } else {
    return std::to_string(v);
  }
}

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += items[i];
  }
  return out;
}

std::string JoinInts(const std::vector<int>& items) {
  std::vector<std::string> s;
  for (int i : items) s.push_back(std::to_string(i));
  return Join(s);
}

// Binds a numeric field reached through `field`.
template <typename T, typename F>
ConfigKey Number(std::string name, std::string help, F field) {
  return ConfigKey{
      name, std::move(help),
      [field](const ExperimentConfig& c) {
        ExperimentConfig copy = c;
        return Str(field(copy));
      },
      [field, name](ExperimentConfig& c, const std::string& v) {
        field(c) = ParseNumber<T>(name, v);
      }};
}

std::vector<ConfigKey> BuildKeys() {
  using C = ExperimentConfig;
  std::vector<ConfigKey> k;
  k.push_back({"env", "environment: soccer or commons",
               [](const C& c) { return c.env; },
               [](C& c, const std::string& v) { c.env = v; }});
  k.push_back({"opponents",
               "comma-separated opponent ids (scripted or qlearner:<model>); "
               "empty for every scripted opponent",
               [](const C& c) { return Join(c.opponents); },
               [](C& c, const std::string& v) { c.opponents = SplitList(v); }});
  k.push_back({"output_dir", "artifact directory",
               [](const C& c) { return c.output_dir; },
               [](C& c, const std::string& v) { c.output_dir = v; }});
  k.push_back(Number<uint64_t>("seed", "base seed (QMIXLAB_SEED overrides)",
                               [](C& c) -> uint64_t& { return c.seed; }));

  k.push_back(Number<int>("soccer.horizon", "soccer step cap (draw at cap)",
                          [](C& c) -> int& { return c.soccer_horizon; }));
  k.push_back(Number<int>("commons.beam_length", "tag beam length",
                          [](C& c) -> int& { return c.commons.beam_length; }));
  k.push_back(Number<int>("commons.tag_duration", "steps a tagged player is out",
                          [](C& c) -> int& { return c.commons.tag_duration; }));
  k.push_back(Number<double>("commons.regrowth_rate", "apple regrowth coefficient",
                             [](C& c) -> double& { return c.commons.regrowth_rate; }));
  k.push_back(Number<int>("commons.horizon", "commons step cap",
                          [](C& c) -> int& { return c.commons.horizon; }));
  k.push_back({"commons.map", "map file; empty for the built-in map",
               [](const C& c) { return c.commons_map; },
               [](C& c, const std::string& v) { c.commons_map = v; }});

  k.push_back(Number<int64_t>("train.timesteps", "BR training steps",
                              [](C& c) -> int64_t& { return c.train.timesteps; }));
  k.push_back(Number<double>("train.learning_rate", "Adam step size",
                             [](C& c) -> double& { return c.train.learning_rate; }));
  k.push_back(Number<int>("train.buffer_capacity", "replay capacity",
                          [](C& c) -> int& { return c.train.buffer_capacity; }));
  k.push_back(Number<int>("train.batch_size", "DQN minibatch",
                          [](C& c) -> int& { return c.train.batch_size; }));
  k.push_back(Number<double>("train.gamma", "discount",
                             [](C& c) -> double& { return c.train.gamma; }));
  k.push_back(Number<double>("train.exploration_fraction",
                             "share of training over which epsilon decays",
                             [](C& c) -> double& {
                               return c.train.exploration_fraction;
                             }));
  k.push_back(Number<double>("train.final_epsilon", "epsilon after the decay",
                             [](C& c) -> double& { return c.train.final_epsilon; }));
  k.push_back(Number<int>("train.train_frequency", "steps between updates",
                          [](C& c) -> int& { return c.train.train_frequency; }));
  k.push_back(Number<int>("train.training_starts", "steps before the first update",
                          [](C& c) -> int& { return c.train.training_starts; }));
  k.push_back(Number<int>("train.target_sync_interval",
                          "steps between target network copies",
                          [](C& c) -> int& { return c.train.target_sync_interval; }));
  k.push_back({"train.variant", "Q-function: mlp or tabular",
               [](const C& c) {
                 return std::string(c.train.variant == qlearn::QVariant::kMlp
                                        ? "mlp"
                                        : "tabular");
               },
               [](C& c, const std::string& v) {
                 if (v == "mlp") {
                   c.train.variant = qlearn::QVariant::kMlp;
                 } else if (v == "tabular") {
                   c.train.variant = qlearn::QVariant::kTabular;
                 } else {
                   throw InvalidArgument("config key 'train.variant': expected "
                                         "mlp or tabular, got '" + v + "'");
                 }
               }});
  k.push_back({"train.hidden", "hidden layer widths",
               [](const C& c) { return JoinInts(c.train.hidden); },
               [](C& c, const std::string& v) {
                 c.train.hidden = ParseIntList("train.hidden", v);
               }});
  k.push_back(Number<double>("train.tabular_learning_rate",
                             "tabular Q-learning step size",
                             [](C& c) -> double& {
                               return c.train.tabular_learning_rate;
                             }));
  k.push_back({"train.tabular_schedule", "constant or inverse_visits",
               [](const C& c) {
                 return std::string(c.train.tabular_schedule ==
                                            qlearn::TabularSchedule::kConstant
                                        ? "constant"
                                        : "inverse_visits");
               },
               [](C& c, const std::string& v) {
                 if (v == "constant") {
                   c.train.tabular_schedule = qlearn::TabularSchedule::kConstant;
                 } else if (v == "inverse_visits") {
                   c.train.tabular_schedule =
                       qlearn::TabularSchedule::kInverseVisits;
                 } else {
                   throw InvalidArgument(
                       "config key 'train.tabular_schedule': expected constant "
                       "or inverse_visits, got '" + v + "'");
                 }
               }});
  k.push_back({"train.equal_budget",
               "split train.timesteps evenly over the pure-strategy BRs",
               [](const C& c) { return std::string(c.equal_budget ? "true" : "false"); },
               [](C& c, const std::string& v) {
                 c.equal_budget = ParseBool("train.equal_budget", v);
               }});

  k.push_back({"opc.kind", "classifier: network or tabular",
               [](const C& c) { return c.opc_kind; },
               [](C& c, const std::string& v) { c.opc_kind = v; }});
  k.push_back(Number<double>("opc.learning_rate", "classifier Adam step size",
                             [](C& c) -> double& { return c.opc.learning_rate; }));
  k.push_back(Number<int>("opc.batch_size", "classifier minibatch",
                          [](C& c) -> int& { return c.opc.batch_size; }));
  k.push_back(Number<int>("opc.epochs", "classifier epochs",
                          [](C& c) -> int& { return c.opc.epochs; }));
  k.push_back(Number<int>("opc.patience",
                          "epochs without validation improvement before "
                          "stopping; 0 disables",
                          [](C& c) -> int& { return c.opc.patience; }));
  k.push_back({"opc.hidden", "classifier hidden widths",
               [](const C& c) { return JoinInts(c.opc.hidden); },
               [](C& c, const std::string& v) {
                 c.opc.hidden = ParseIntList("opc.hidden", v);
               }});

  k.push_back(Number<double>("distill.temperature", "softmax temperature",
                             [](C& c) -> double& { return c.distill.temperature; }));
  k.push_back(Number<double>("distill.learning_rate", "student Adam step size",
                             [](C& c) -> double& { return c.distill.learning_rate; }));
  k.push_back(Number<int>("distill.batch_size", "student minibatch",
                          [](C& c) -> int& { return c.distill.batch_size; }));
  k.push_back(Number<int>("distill.epochs", "passes over the buffers",
                          [](C& c) -> int& { return c.distill.epochs; }));
  k.push_back({"distill.hidden", "student hidden widths",
               [](const C& c) { return JoinInts(c.distill.hidden); },
               [](C& c, const std::string& v) {
                 c.distill.hidden = ParseIntList("distill.hidden", v);
               }});
  k.push_back(Number<double>("distill.held_out_fraction",
                             "observations held out for agreement",
                             [](C& c) -> double& {
                               return c.distill.held_out_fraction;
                             }));

  k.push_back(Number<double>("qmvi.gamma", "discount",
                             [](C& c) -> double& { return c.qmvi.gamma; }));
  k.push_back(Number<double>("qmvi.tolerance", "sup-norm stopping threshold",
                             [](C& c) -> double& { return c.qmvi.tolerance; }));
  k.push_back(Number<int>("qmvi.max_iterations", "sweep limit",
                          [](C& c) -> int& { return c.qmvi.max_iterations; }));
  k.push_back(Number<int>("qmvi.occupancy_episodes",
                          "rollouts per opponent for occupancy estimates",
                          [](C& c) -> int& { return c.occupancy_episodes; }));
  k.push_back({"qmvi.smoothing", "add-one smoothing of occupancy counts",
               [](const C& c) {
                 return std::string(c.occupancy_smoothing ? "true" : "false");
               },
               [](C& c, const std::string& v) {
                 c.occupancy_smoothing = ParseBool("qmvi.smoothing", v);
               }});

  k.push_back(Number<double>("eval.grid_step", "mixture grid resolution",
                             [](C& c) -> double& { return c.grid_step; }));
  k.push_back(Number<int>("eval.episodes", "episodes per mixture and seed",
                          [](C& c) -> int& { return c.eval_episodes; }));
  k.push_back(Number<int>("eval.seeds", "evaluation seeds",
                          [](C& c) -> int& { return c.eval_seeds; }));
  k.push_back(Number<int>("eval.threads",
                          "worker threads; 0 uses QMIXLAB_THREADS or all cores",
                          [](C& c) -> int& { return c.threads; }));
  return k;
}

}  // namespace

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = BuildKeys();
  return keys;
}

ExperimentConfig DefaultConfig(const std::string& env) {
  ExperimentConfig c;
  c.env = env;
  if (env == "soccer") {
    c.train = qlearn::TrainConfig::SoccerDefaults();
  } else if (env == "commons") {
    c.train = qlearn::TrainConfig::CommonsDefaults();
  } else {
    throw InvalidArgument("config key 'env': unknown environment '" + env +
                          "' (expected soccer or commons)");
  }
  return c;
}

ExperimentConfig ResolveConfig(
    const std::map<std::string, std::string>& values) {
  const auto env_it = values.find("env");
  ExperimentConfig c =
      DefaultConfig(env_it == values.end() ? "soccer" : env_it->second);
  for (const auto& [key, value] : values) {
    bool found = false;
    for (const ConfigKey& k : ConfigKeys()) {
      if (k.name == key) {
        k.set(c, value);
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument("unknown config key '" + key + "'");
  }
  c.Validate();
  return c;
}

std::map<std::string, std::string> ReadIniFile(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifact("config file not found: " + path);
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument("config file " + path + ": " + e.message() +
                          " (line " + std::to_string(e.line()) + ")");
  }
  std::map<std::string, std::string> out;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      out[name] = node.data();
      continue;
    }
    for (const auto& [key, leaf] : node) out[name + "." + key] = leaf.data();
  }
  return out;
}

void ApplyEnvironmentOverrides(std::map<std::string, std::string>& values) {
  if (const char* seed = std::getenv("QMIXLAB_SEED")) {
    if (*seed != '\0') values["seed"] = seed;
  }
}

std::string ConfigToIni(const ExperimentConfig& config) {
  std::string top, sections, current;
  for (const ConfigKey& k : ConfigKeys()) {
    const auto dot = k.name.find('.');
    if (dot == std::string::npos) {
      top += k.name + " = " + k.get(config) + "\n";
      continue;
    }
    const std::string section = k.name.substr(0, dot);
    if (section != current) {
      sections += "\n[" + section + "]\n";
      current = section;
    }
    sections += k.name.substr(dot + 1) + " = " + k.get(config) + "\n";
  }
  return top + sections;
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw InvalidArgument("config: " + what);
  };
  if (env != "soccer" && env != "commons") {
    fail("env must be soccer or commons, got '" + env + "'");
  }
  if (soccer_horizon <= 0) fail("soccer.horizon must be positive");
  if (commons.beam_length <= 0) fail("commons.beam_length must be positive");
  if (commons.tag_duration <= 0) fail("commons.tag_duration must be positive");
  if (commons.horizon <= 0) fail("commons.horizon must be positive");
  if (!(commons.regrowth_rate >= 0.0 && commons.regrowth_rate <= 1.0)) {
    fail("commons.regrowth_rate must be in [0, 1]");
  }
  train.Validate();
  opc.Validate();
  if (opc_kind != "network" && opc_kind != "tabular") {
    fail("opc.kind must be network or tabular, got '" + opc_kind + "'");
  }
  distill.Validate();
  if (!(qmvi.gamma >= 0.0 && qmvi.gamma <= 1.0)) fail("qmvi.gamma must be in [0, 1]");
  if (!(qmvi.tolerance > 0.0)) fail("qmvi.tolerance must be positive");
  if (qmvi.max_iterations <= 0) fail("qmvi.max_iterations must be positive");
  if (occupancy_episodes <= 0) fail("qmvi.occupancy_episodes must be positive");
  const double units = 1.0 / grid_step;
  if (!(grid_step > 0.0 && grid_step <= 1.0) ||
      std::abs(units - std::round(units)) > 1e-9) {
    fail("eval.grid_step must be 1/n for a positive integer n");
  }
  if (eval_episodes <= 0) fail("eval.episodes must be positive");
  if (eval_seeds <= 0) fail("eval.seeds must be positive");
  if (threads < 0) fail("eval.threads must be >= 0");

  const std::vector<std::string> ids = OpponentIds();
  if (ids.empty()) fail("no opponents");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (ids[i] == ids[j]) fail("duplicate opponent '" + ids[i] + "'");
    }
    if (ids[i].starts_with(kQlearnerPrefix)) {
      const std::string path = ids[i].substr(kQlearnerPrefix.size());
      if (!std::filesystem::exists(path)) {
        throw MissingArtifact("opponent model not found: " + path);
      }
    }
  }
  if (!commons_map.empty() && !std::filesystem::exists(commons_map)) {
    throw MissingArtifact("commons map not found: " + commons_map);
  }
}

std::unique_ptr<envs::Environment> ExperimentConfig::MakeEnvironment() const {
  if (env == "soccer") {
    return std::make_unique<envs::SoccerGame>(envs::SoccerConfig{soccer_horizon});
  }
  if (env == "commons") {
    return std::make_unique<envs::CommonsGame>(
        commons_map.empty() ? envs::DefaultCommonsMap()
                            : envs::LoadCommonsMap(commons_map),
        commons);
  }
  throw InvalidArgument("unknown environment '" + env + "'");
}

std::vector<std::string> ExperimentConfig::OpponentIds() const {
  return opponents.empty() ? envs::ScriptedOpponentIds(env) : opponents;
}

std::vector<uint64_t> ExperimentConfig::EvalSeedList() const {
  std::vector<uint64_t> seeds;
  for (int i = 0; i < eval_seeds; ++i) {
    seeds.push_back(DeriveSeed(seed, {0xe7a1, static_cast<uint64_t>(i)}));
  }
  return seeds;
}

int64_t ExperimentConfig::PureTimesteps() const {
  if (!equal_budget) return train.timesteps;
  return train.timesteps / static_cast<int64_t>(OpponentIds().size());
}

}  // namespace qmixlab::cli
