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

#ifndef QMIXLAB_ENVS_COMMONS_H_
#define QMIXLAB_ENVS_COMMONS_H_

// Gathering-style commons game. Two players harvest apples (+1 each) from an
// orchard whose regrowth depends on the apples left nearby, and can tag each
// other out with a forward beam.
//
// Movement actions are egocentric: "north" steps forward along the facing,
// "south" steps back, "east"/"west" strafe right/left. Observations are a
// 20-deep, 10-wide window in front of the agent, rotated so the agent faces
// up, one-hot over {empty, apple, wall, self, other}.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qmixlab/common/random.h"
#include "qmixlab/envs/environment.h"
#include "qmixlab/envs/soccer.h"

namespace qmixlab::envs {

inline constexpr int kCommonsActions = 8;
inline constexpr int kCommonsWindowDepth = 20;
inline constexpr int kCommonsWindowWidth = 10;
// Lateral index of the agent's own column inside the window.
inline constexpr int kCommonsWindowSelfColumn = 5;
inline constexpr int kCommonsCategories = 5;
inline constexpr int kCommonsObservationSize =
    kCommonsWindowDepth * kCommonsWindowWidth * kCommonsCategories;

enum CommonsAction : int {
  kMoveForward = 0,  // "N"
  kMoveBack = 1,     // "S"
  kStrafeRight = 2,  // "E"
  kStrafeLeft = 3,   // "W"
  kTurnLeft = 4,
  kTurnRight = 5,
  kTag = 6,
  kNoop = 7,
};

enum CommonsCategory : int {
  kWindowEmpty = 0,
  kWindowApple = 1,
  kWindowWall = 2,
  kWindowSelf = 3,
  kWindowOther = 4,
};

enum class Tile : uint8_t { kEmpty = 0, kApple = 1, kWall = 2 };

// Facing: 0 = N, 1 = E, 2 = S, 3 = W.
enum Facing : int { kFaceNorth = 0, kFaceEast = 1, kFaceSouth = 2, kFaceWest = 3 };

struct CommonsMap {
  int rows = 0;
  int cols = 0;
  std::vector<Tile> tiles;  // initial tiles, row-major
  std::vector<bool> apple_tile;  // tiles where apples can (re)grow
  std::array<GridPos, 2> spawns;
  int num_apple_tiles = 0;

  Tile at(int r, int c) const {
    return tiles[static_cast<std::size_t>(r * cols + c)];
  }
};

// Parses the plain-text map format: '#' wall, '.' empty, 'A' apple, '1'/'2'
// spawn tiles, one row per line. Ragged rows, unknown characters and
// missing/duplicate spawns are rejected.
CommonsMap ParseCommonsMap(std::string_view text);
CommonsMap LoadCommonsMap(const std::string& path);
const CommonsMap& DefaultCommonsMap();
std::string_view DefaultCommonsMapText();

struct CommonsConfig {
  int beam_length = 10;
  int tag_duration = 25;
  double regrowth_rate = 0.01;
  int horizon = 500;
};

struct CommonsPlayer {
  GridPos pos;
  int facing = kFaceNorth;
  int countdown = 0;  // steps left tagged out
  bool present = true;

  bool operator==(const CommonsPlayer&) const = default;
};

struct CommonsState {
  int rows = 0;
  int cols = 0;
  std::vector<Tile> tiles;
  std::vector<bool> apple_tile;
  std::array<GridPos, 2> spawns;
  std::array<CommonsPlayer, 2> players;
  int step = 0;
  bool terminal = false;

  Tile at(int r, int c) const {
    return tiles[static_cast<std::size_t>(r * cols + c)];
  }
  bool InBounds(int r, int c) const {
    return r >= 0 && r < rows && c >= 0 && c < cols;
  }
  int AppleCount() const;
  bool operator==(const CommonsState&) const = default;
};

struct CommonsOutcome {
  CommonsState next;
  std::array<double, 2> rewards{0.0, 0.0};
  bool terminal = false;
  std::array<int, 2> apples_picked{0, 0};
  std::array<bool, 2> tagged{false, false};  // hit by a beam this step
  int regrown = 0;
};

// Seed selects the initial facings.
CommonsState CommonsReset(uint64_t seed, const CommonsMap& map);

CommonsOutcome CommonsStep(const CommonsState& state,
                           const std::array<int, 2>& actions, Rng& rng,
                           const CommonsConfig& config = {});

Observation CommonsEncode(const CommonsState& state, int perspective);

// Window categories (depth-major, left to right) of an encoded observation.
std::vector<int> CommonsDecodeWindow(const Observation& obs);

// Regrowth probability of an empty apple tile: min(1, rate * n) with n the
// apples within Chebyshev distance 2.
double CommonsRegrowthProbability(const CommonsState& state, int r, int c,
                                  double rate);

class CommonsGame final : public Environment {
 public:
  explicit CommonsGame(CommonsMap map = DefaultCommonsMap(),
                       CommonsConfig config = {});

  std::string name() const override { return "commons"; }
  int num_actions() const override { return kCommonsActions; }
  int observation_size() const override { return kCommonsObservationSize; }
  void Reset(uint64_t seed) override;
  Observation Observe(int player) const override;
  StepResult Step(int learner_action, int opponent_action, Rng& rng) override;
  bool terminal() const override { return state_.terminal; }
  std::unique_ptr<Environment> Clone() const override;

  const CommonsState& state() const { return state_; }
  void set_state(const CommonsState& s) { state_ = s; }
  const CommonsConfig& config() const { return config_; }
  const CommonsMap& map() const { return *map_; }

 private:
  std::shared_ptr<const CommonsMap> map_;
  CommonsConfig config_;
  CommonsState state_;
};

}  // namespace qmixlab::envs

#endif  // QMIXLAB_ENVS_COMMONS_H_
