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

#ifndef QMIXLAB_COMMON_ERROR_H_
#define QMIXLAB_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace qmixlab {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kMissingArtifact = 3,
  kNumericalFailure = 4,
};

// Base class for every error raised by the library. Each error carries the
// exit code the CLI reports when it escapes a command.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Invalid argument, malformed input or configuration.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(what, ExitCode::kConfigError) {}
};

// A precondition on object state was violated (e.g. stepping a finished
// episode).
class StateError : public Error {
 public:
  explicit StateError(const std::string& what)
      : Error(what, ExitCode::kConfigError) {}
};

// A file the command needs is absent or unreadable.
class MissingArtifact : public Error {
 public:
  explicit MissingArtifact(const std::string& what)
      : Error(what, ExitCode::kMissingArtifact) {}
};

// A persisted document could not be parsed or validated.
class CorruptDocument : public Error {
 public:
  explicit CorruptDocument(const std::string& what)
      : Error("corrupt document: " + what, ExitCode::kConfigError) {}
};

// Non-convergence or non-finite values.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(what, ExitCode::kNumericalFailure) {}
};

}  // namespace qmixlab

#endif  // QMIXLAB_COMMON_ERROR_H_
