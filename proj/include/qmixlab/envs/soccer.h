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

#ifndef QMIXLAB_ENVS_SOCCER_H_
#define QMIXLAB_ENVS_SOCCER_H_

// Two-player grid soccer on a 4x5 field (rows x cols):
//
//     . . . . .
//   [ . . O 1 . ]     goals are the off-field cells beside rows 1 and 2;
//   [ . 0 O . . ]     player 0 scores on the right, player 1 on the left.
//     . . . . .
//
// The ball spawns on one of the two 'O' cells. Each step the two actions
// are executed in a uniformly random order. A player that moves into the
// ball carrier while the carrier moves second takes the ball; every other
// collision is a no-op bounce.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qmixlab/common/random.h"
#include "qmixlab/envs/environment.h"

namespace qmixlab::envs {

inline constexpr int kSoccerRows = 4;
inline constexpr int kSoccerCols = 5;
inline constexpr int kSoccerCells = kSoccerRows * kSoccerCols;
inline constexpr int kSoccerActions = 5;
inline constexpr int kSoccerCategories = 6;
inline constexpr int kSoccerObservationSize = kSoccerCells * kSoccerCategories;
inline constexpr int kSoccerDefaultHorizon = 100;
// Number of distinct non-terminal configurations (positions + ball).
inline constexpr int kSoccerNumStates = 20 * 19 * 20;

enum SoccerAction : int {
  kNorth = 0,
  kSouth = 1,
  kEast = 2,
  kWest = 3,
  kStay = 4,
};

// Per-cell categories of the encoding.
enum SoccerCategory : int {
  kSelfNoBall = 0,
  kSelfWithBall = 1,
  kOtherNoBall = 2,
  kOtherWithBall = 3,
  kBallOnGround = 4,
  kUnoccupied = 5,
};

enum class BallHolder : int8_t { kPlayer0 = 0, kPlayer1 = 1, kGround = 2 };

struct GridPos {
  int row = -1;
  int col = -1;
  bool operator==(const GridPos&) const = default;
};

struct SoccerState {
  std::array<GridPos, 2> players;
  BallHolder holder = BallHolder::kGround;
  GridPos ball;  // valid iff holder == kGround
  int step = 0;
  int winner = -1;
  bool terminal = false;

  bool operator==(const SoccerState&) const = default;
};

struct SoccerConfig {
  int horizon = kSoccerDefaultHorizon;
};

struct SoccerOutcome {
  SoccerState next;
  std::array<double, 2> rewards{0.0, 0.0};
  bool terminal = false;
  int scorer = -1;
};

inline constexpr std::array<GridPos, 2> kSoccerBallSpawns{GridPos{1, 2},
                                                          GridPos{2, 2}};
inline constexpr std::array<GridPos, 2> kSoccerPlayerSpawns{GridPos{2, 1},
                                                            GridPos{1, 3}};

SoccerState SoccerReset(uint64_t seed);

// Applies absolute-frame actions; execution order is drawn from rng.
SoccerOutcome SoccerStep(const SoccerState& state,
                         const std::array<int, 2>& actions, Rng& rng,
                         const SoccerConfig& config = {});

// Deterministic step given which player executes first.
SoccerOutcome SoccerApply(const SoccerState& state,
                          const std::array<int, 2>& actions, int first_mover,
                          const SoccerConfig& config = {});

// 120-long one-hot encoding. The perspective player is always encoded as
// "self" and the board is rotated 180 degrees for player 1, so both seats
// see themselves attacking to the right.
Observation SoccerEncode(const SoccerState& state, int perspective);

// Inverse of SoccerEncode for the visible content (step counter and
// terminal bookkeeping are not encoded and come back zeroed).
SoccerState SoccerDecode(const Observation& obs, int perspective);

// Compact key: ((self_cell * 20 + other_cell) * 22 + ball_code).
uint64_t SoccerKey(const SoccerState& state, int perspective);

// Converts an action between player 1's local frame and the absolute frame
// (the 180-degree rotation swaps N/S and E/W; it is its own inverse).
int SoccerRotateAction(int action);

bool SoccerStateValid(const SoccerState& state);

std::string SoccerToString(const SoccerState& state);

class SoccerGame final : public Environment, public EnumerableGame {
 public:
  explicit SoccerGame(SoccerConfig config = {});

  std::string name() const override { return "soccer"; }
  int num_actions() const override { return kSoccerActions; }
  int observation_size() const override { return kSoccerObservationSize; }
  void Reset(uint64_t seed) override;
  Observation Observe(int player) const override;
  StepResult Step(int learner_action, int opponent_action, Rng& rng) override;
  bool terminal() const override { return state_.terminal; }
  std::unique_ptr<Environment> Clone() const override;
  const EnumerableGame* enumerable() const override { return this; }

  int NumStates() const override { return kSoccerNumStates; }
  Observation StateObservation(int state, int player) const override;
  int StateIndexOfKey(uint64_t key) const override;
  std::vector<std::pair<int, double>> InitialDistribution() const override;
  void Transitions(int state, int learner_action, int opponent_action,
                   std::vector<Outcome>& out) const override;

  const SoccerState& state() const { return state_; }
  void set_state(const SoccerState& s) { state_ = s; }
  const SoccerState& EnumeratedState(int index) const;
  const SoccerConfig& config() const { return config_; }

 private:
  SoccerConfig config_;
  SoccerState state_;
  std::shared_ptr<const std::vector<SoccerState>> states_;
  std::shared_ptr<const std::vector<int>> key_to_index_;
};

}  // namespace qmixlab::envs

#endif  // QMIXLAB_ENVS_SOCCER_H_
