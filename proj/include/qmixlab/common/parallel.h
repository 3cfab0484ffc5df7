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

#ifndef QMIXLAB_COMMON_PARALLEL_H_
#define QMIXLAB_COMMON_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace qmixlab {

// Worker count: QMIXLAB_THREADS if set and positive, else the hardware
// concurrency (at least 1).
int DefaultThreadCount();

// Runs fn(i) for i in [0, n) on up to `threads` workers. Tasks must write
// only to their own output slot; the caller merges in index order, so results
// do not depend on the schedule. The first exception thrown by a task is
// rethrown after all workers join.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn,
                 int threads = 0);

}  // namespace qmixlab

#endif  // QMIXLAB_COMMON_PARALLEL_H_
