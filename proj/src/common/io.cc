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

#include "qmixlab/common/io.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qmixlab/common/error.h"

namespace qmixlab {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::string& path, const std::string& contents,
                     bool force) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!force && fs::exists(path, ec)) {
    throw InvalidArgument("refusing to overwrite '" + path +
                          "' (pass --force)");
  }
  const fs::path target(path);
  if (target.has_parent_path() && !fs::exists(target.parent_path(), ec)) {
    throw MissingArtifact("directory '" + target.parent_path().string() +
                          "' does not exist");
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw MissingArtifact("cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw MissingArtifact("write to '" + tmp + "' failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw MissingArtifact("cannot move '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace qmixlab
