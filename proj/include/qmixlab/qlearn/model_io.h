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

#ifndef QMIXLAB_QLEARN_MODEL_IO_H_
#define QMIXLAB_QLEARN_MODEL_IO_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "qmixlab/qlearn/mlp.h"
#include "qmixlab/qlearn/qfunction.h"
#include "qmixlab/qlearn/replay_buffer.h"
#include "qmixlab/qlearn/train.h"

namespace qmixlab::qlearn {

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kReplayFormatVersion = 1;

// On-disk model: a network or a table plus metadata. Shared by Q-functions,
// students and opponent classifiers.
struct ModelDocument {
  std::string variant;  // mlp, tabular, classifier, tabular_classifier
  int observation_size = 0;
  int output_size = 0;  // actions, or classes for classifiers
  Mlp net;
  std::unordered_map<uint64_t, std::vector<double>> table;
  std::vector<std::string> labels;  // class ids for classifiers
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json provenance = nlohmann::json::object();

  bool is_network() const;
};

nlohmann::json ModelToJson(const ModelDocument& doc);
// Throws CorruptDocument for malformed input or an unknown version.
ModelDocument ModelFromJson(const nlohmann::json& j);

void SaveModel(const std::string& path, const ModelDocument& doc, bool force);
// Throws MissingArtifact if absent, CorruptDocument if unreadable.
ModelDocument LoadModel(const std::string& path);

ModelDocument QFunctionDocument(const QFunction& q);
// Throws CorruptDocument unless the document holds a Q-function.
QFunction QFunctionFromDocument(const ModelDocument& doc);

nlohmann::json TrainConfigToJson(const TrainConfig& config);

// One JSON header line, then one line per transition (oldest first).
std::string ReplayToJsonl(const ReplayBuffer& buffer,
                          const std::vector<std::string>& opponent_ids);
struct ReplayFile {
  ReplayBuffer buffer;
  std::vector<std::string> opponent_ids;
};
ReplayFile ReplayFromJsonl(const std::string& text);

void SaveReplay(const std::string& path, const ReplayBuffer& buffer,
                const std::vector<std::string>& opponent_ids, bool force);
ReplayFile LoadReplay(const std::string& path);

}  // namespace qmixlab::qlearn

#endif  // QMIXLAB_QLEARN_MODEL_IO_H_
