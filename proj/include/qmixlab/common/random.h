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

#ifndef QMIXLAB_COMMON_RANDOM_H_
#define QMIXLAB_COMMON_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace qmixlab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a key path. The
// result depends only on the values, never on call order, so work can be
// scheduled in any order without changing results.
inline uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> keys) {
  uint64_t h = Mix64(base);
  for (uint64_t k : keys) h = Mix64(h ^ Mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

// FNV-1a, used to turn names into seed keys.
constexpr uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform real in [0, 1) with 53 bits; std::generate_canonical is not
// guaranteed to be < 1 on every standard library.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline int UniformInt(Rng& rng, int n) {
  return static_cast<int>(Uniform01(rng) * n);
}

}  // namespace qmixlab

#endif  // QMIXLAB_COMMON_RANDOM_H_
