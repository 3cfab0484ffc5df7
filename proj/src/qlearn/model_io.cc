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

#include "qmixlab/qlearn/model_io.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmixlab/common/error.h"
#include "qmixlab/common/io.h"

namespace qmixlab::qlearn {
namespace {

using nlohmann::json;

const json& Field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw CorruptDocument(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

int IntField(const json& j, const char* name) {
  const json& v = Field(j, name);
  if (!v.is_number_integer()) {
    throw CorruptDocument(std::string("field '") + name +
                          "' is not an integer");
  }
  return v.get<int>();
}

double Real(const json& v, const std::string& where) {
  if (!v.is_number()) throw CorruptDocument(where + " is not a number");
  return v.get<double>();
}

std::vector<double> RealArray(const json& v, std::size_t expected,
                              const std::string& where) {
  if (!v.is_array()) throw CorruptDocument(where + " is not an array");
  if (v.size() != expected) {
    throw CorruptDocument(where + " has " + std::to_string(v.size()) +
                          " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json& x : v) out.push_back(Real(x, where));
  return out;
}

void CheckFinite(std::span<const double> values, const std::string& where) {
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw NumericalError(where + " contains a non-finite value");
    }
  }
}

json ObservationToJson(const envs::Observation& obs) {
  return json{{"size", obs.size}, {"key", obs.key}, {"active", obs.active}};
}

envs::Observation ObservationFromJson(const json& j) {
  envs::Observation obs;
  obs.size = IntField(j, "size");
  const json& key = Field(j, "key");
  if (!key.is_number_unsigned() && !key.is_number_integer()) {
    throw CorruptDocument("observation key is not an integer");
  }
  obs.key = key.get<uint64_t>();
  const json& active = Field(j, "active");
  if (!active.is_array()) throw CorruptDocument("observation active list");
  for (const json& i : active) {
    if (!i.is_number_integer()) throw CorruptDocument("observation index");
    const int32_t idx = i.get<int32_t>();
    if (idx < 0 || idx >= obs.size) {
      throw CorruptDocument("observation index out of range");
    }
    obs.active.push_back(idx);
  }
  return obs;
}

}  // namespace

bool ModelDocument::is_network() const {
  return variant == "mlp" || variant == "classifier";
}

json ModelToJson(const ModelDocument& doc) {
  json j;
  j["format"] = "qmixlab-model";
  j["format_version"] = kModelFormatVersion;
  j["variant"] = doc.variant;
  j["observation_size"] = doc.observation_size;
  j["output_size"] = doc.output_size;
  if (!doc.labels.empty()) j["labels"] = doc.labels;
  if (doc.is_network()) {
    const Mlp& net = doc.net;
    CheckFinite(net.parameters(), "model weights");
    j["layer_dims"] = net.dims();
    json layers = json::array();
    for (int l = 0; l < net.num_layers(); ++l) {
      const std::size_t out = static_cast<std::size_t>(net.dims()[l + 1]);
      const std::span<const double> w = net.weights(l);
      json rows = json::array();
      for (std::size_t i = 0; i < w.size(); i += out) {
        rows.push_back(std::vector<double>(w.begin() + i, w.begin() + i + out));
      }
      const std::span<const double> b = net.biases(l);
      layers.push_back(json{{"weights", std::move(rows)},
                            {"biases", std::vector<double>(b.begin(), b.end())}});
    }
    j["layers"] = std::move(layers);
  } else {
    std::vector<uint64_t> keys;
    keys.reserve(doc.table.size());
    for (const auto& [k, v] : doc.table) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    json rows = json::array();
    for (uint64_t k : keys) {
      const std::vector<double>& v = doc.table.at(k);
      CheckFinite(v, "table row");
      rows.push_back(json{{"key", k}, {"values", v}});
    }
    j["table"] = std::move(rows);
  }
  j["config"] = doc.config;
  j["provenance"] = doc.provenance;
  return j;
}

ModelDocument ModelFromJson(const json& j) {
  if (!j.is_object()) throw CorruptDocument("model is not an object");
  const int version = IntField(j, "format_version");
  if (version != kModelFormatVersion) {
    throw CorruptDocument("unsupported model format version " +
                          std::to_string(version));
  }
  ModelDocument doc;
  const json& variant = Field(j, "variant");
  if (!variant.is_string()) throw CorruptDocument("variant is not a string");
  doc.variant = variant.get<std::string>();
  if (doc.variant != "mlp" && doc.variant != "tabular" &&
      doc.variant != "classifier" && doc.variant != "tabular_classifier") {
    throw CorruptDocument("unknown variant '" + doc.variant + "'");
  }
  doc.observation_size = IntField(j, "observation_size");
  doc.output_size = IntField(j, "output_size");
  if (doc.observation_size <= 0 || doc.output_size <= 0) {
    throw CorruptDocument("sizes must be positive");
  }
  if (j.contains("labels")) {
    for (const json& l : j.at("labels")) {
      if (!l.is_string()) throw CorruptDocument("label is not a string");
      doc.labels.push_back(l.get<std::string>());
    }
  }
  if (doc.is_network()) {
    const json& dims_json = Field(j, "layer_dims");
    std::vector<int> dims;
    for (const json& d : dims_json) {
      if (!d.is_number_integer() || d.get<int>() <= 0) {
        throw CorruptDocument("layer_dims entries must be positive integers");
      }
      dims.push_back(d.get<int>());
    }
    if (dims.size() < 2) throw CorruptDocument("layer_dims needs two entries");
    if (dims.front() != doc.observation_size) {
      throw CorruptDocument("layer_dims input " + std::to_string(dims.front()) +
                            " does not match observation_size " +
                            std::to_string(doc.observation_size));
    }
    if (dims.back() != doc.output_size) {
      throw CorruptDocument("layer_dims output " + std::to_string(dims.back()) +
                            " does not match output_size " +
                            std::to_string(doc.output_size));
    }
    doc.net = Mlp(dims);
    const json& layers = Field(j, "layers");
    if (!layers.is_array() || layers.size() != dims.size() - 1) {
      throw CorruptDocument("expected " + std::to_string(dims.size() - 1) +
                            " layers");
    }
    for (int l = 0; l < doc.net.num_layers(); ++l) {
      const std::string where = "layer " + std::to_string(l);
      const json& rows = Field(layers[static_cast<std::size_t>(l)], "weights");
      const std::size_t in = static_cast<std::size_t>(dims[l]);
      const std::size_t out = static_cast<std::size_t>(dims[l + 1]);
      if (!rows.is_array() || rows.size() != in) {
        throw CorruptDocument(where + " weights have " +
                              std::to_string(rows.is_array() ? rows.size() : 0) +
                              " rows, layer_dims expects " + std::to_string(in));
      }
      std::span<double> w = doc.net.weights(l);
      for (std::size_t i = 0; i < in; ++i) {
        const std::vector<double> row =
            RealArray(rows[i], out, where + " weight row " + std::to_string(i));
        std::copy(row.begin(), row.end(), w.begin() + i * out);
      }
      const std::vector<double> b = RealArray(
          Field(layers[static_cast<std::size_t>(l)], "biases"), out,
          where + " biases");
      std::copy(b.begin(), b.end(), doc.net.biases(l).begin());
    }
  } else {
    const json& rows = Field(j, "table");
    if (!rows.is_array()) throw CorruptDocument("table is not an array");
    for (const json& row : rows) {
      const json& key = Field(row, "key");
      if (!key.is_number_unsigned() && !key.is_number_integer()) {
        throw CorruptDocument("table key is not an integer");
      }
      const uint64_t k = key.get<uint64_t>();
      if (doc.table.count(k)) throw CorruptDocument("duplicate table key");
      doc.table[k] = RealArray(Field(row, "values"),
                               static_cast<std::size_t>(doc.output_size),
                               "table row");
    }
  }
  if (j.contains("config")) doc.config = j.at("config");
  if (j.contains("provenance")) doc.provenance = j.at("provenance");
  return doc;
}

void SaveModel(const std::string& path, const ModelDocument& doc, bool force) {
  WriteFileAtomic(path, ModelToJson(doc).dump() + "\n", force);
}

ModelDocument LoadModel(const std::string& path) {
  const std::string text = ReadFile(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CorruptDocument("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return ModelFromJson(j);
  } catch (const json::exception& e) {
    throw CorruptDocument("'" + path + "': " + e.what());
  }
}

ModelDocument QFunctionDocument(const QFunction& q) {
  ModelDocument doc;
  doc.observation_size = q.observation_size();
  doc.output_size = q.num_actions();
  if (q.variant() == QVariant::kMlp) {
    doc.variant = "mlp";
    doc.net = q.net();
  } else {
    doc.variant = "tabular";
    doc.table = q.table();
  }
  return doc;
}

QFunction QFunctionFromDocument(const ModelDocument& doc) {
  if (doc.variant == "mlp") return QFunction::FromNetwork(doc.net);
  if (doc.variant == "tabular") {
    QFunction q = QFunction::Tabular(doc.observation_size, doc.output_size);
    q.mutable_table() = doc.table;
    return q;
  }
  throw CorruptDocument("model variant '" + doc.variant +
                        "' is not a Q-function");
}

json TrainConfigToJson(const TrainConfig& c) {
  return json{
      {"timesteps", c.timesteps},
      {"learning_rate", c.learning_rate},
      {"buffer_capacity", c.buffer_capacity},
      {"batch_size", c.batch_size},
      {"gamma", c.gamma},
      {"exploration_fraction", c.exploration_fraction},
      {"final_epsilon", c.final_epsilon},
      {"train_frequency", c.train_frequency},
      {"training_starts", c.training_starts},
      {"target_sync_interval", c.target_sync_interval},
      {"seed", c.seed},
      {"variant", c.variant == QVariant::kMlp ? "mlp" : "tabular"},
      {"hidden", c.hidden},
      {"tabular_learning_rate", c.tabular_learning_rate},
      {"tabular_schedule", c.tabular_schedule == TabularSchedule::kConstant
                               ? "constant"
                               : "inverse_visits"},
  };
}

std::string ReplayToJsonl(const ReplayBuffer& buffer,
                          const std::vector<std::string>& opponent_ids) {
  std::string out;
  out += json{{"format", "qmixlab-replay"},
              {"format_version", kReplayFormatVersion},
              {"capacity", buffer.capacity()},
              {"opponents", opponent_ids}}
             .dump();
  out += '\n';
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    const Transition& t = buffer[i];
    if (!std::isfinite(t.reward)) {
      throw NumericalError("replay: non-finite reward");
    }
    out += json{{"obs", ObservationToJson(t.obs)},
                {"action", t.action},
                {"reward", t.reward},
                {"next_obs", ObservationToJson(t.next_obs)},
                {"terminal", t.terminal},
                {"opponent", t.opponent}}
               .dump();
    out += '\n';
  }
  return out;
}

ReplayFile ReplayFromJsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw CorruptDocument("replay file is empty");
  ReplayFile file;
  try {
    const json header = json::parse(line);
    const int version = IntField(header, "format_version");
    if (version != kReplayFormatVersion) {
      throw CorruptDocument("unsupported replay format version " +
                            std::to_string(version));
    }
    const json& cap = Field(header, "capacity");
    if (!cap.is_number_unsigned() && !cap.is_number_integer()) {
      throw CorruptDocument("replay capacity is not an integer");
    }
    file.buffer = ReplayBuffer(cap.get<std::size_t>());
    for (const json& id : Field(header, "opponents")) {
      file.opponent_ids.push_back(id.get<std::string>());
    }
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json r = json::parse(line);
      Transition t;
      t.obs = ObservationFromJson(Field(r, "obs"));
      t.action = IntField(r, "action");
      t.reward = Real(Field(r, "reward"), "reward");
      t.next_obs = ObservationFromJson(Field(r, "next_obs"));
      const json& terminal = Field(r, "terminal");
      if (!terminal.is_boolean()) throw CorruptDocument("terminal flag");
      t.terminal = terminal.get<bool>();
      t.opponent = IntField(r, "opponent");
      if (t.opponent < -1 ||
          t.opponent >= static_cast<int>(file.opponent_ids.size())) {
        throw CorruptDocument("line " + std::to_string(line_no) +
                              ": opponent label out of range");
      }
      file.buffer.Add(std::move(t));
    }
  } catch (const json::exception& e) {
    throw CorruptDocument(std::string("replay: ") + e.what());
  }
  return file;
}

void SaveReplay(const std::string& path, const ReplayBuffer& buffer,
                const std::vector<std::string>& opponent_ids, bool force) {
  WriteFileAtomic(path, ReplayToJsonl(buffer, opponent_ids), force);
}

ReplayFile LoadReplay(const std::string& path) {
  return ReplayFromJsonl(ReadFile(path));
}

}  // namespace qmixlab::qlearn
