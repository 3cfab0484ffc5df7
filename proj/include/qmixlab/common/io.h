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

#ifndef QMIXLAB_COMMON_IO_H_
#define QMIXLAB_COMMON_IO_H_

#include <string>

namespace qmixlab {

// Reads a whole file. Throws MissingArtifact if it cannot be opened.
std::string ReadFile(const std::string& path);

// Writes through a temporary sibling file and renames it into place, so a
// crash never leaves a truncated file. Refuses to replace an existing file
// unless `force` is set.
void WriteFileAtomic(const std::string& path, const std::string& contents,
                     bool force);

}  // namespace qmixlab

#endif  // QMIXLAB_COMMON_IO_H_
