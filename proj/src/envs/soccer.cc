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

#include "qmixlab/envs/soccer.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "qmixlab/common/error.h"

namespace qmixlab::envs {
namespace {

constexpr std::array<int, kSoccerActions> kRowDelta{-1, 1, 0, 0, 0};
constexpr std::array<int, kSoccerActions> kColDelta{0, 0, 1, -1, 0};
constexpr int kBallCodes = kSoccerCells + 2;
constexpr int kKeySpace = kSoccerCells * kSoccerCells * kBallCodes;

bool InBounds(const GridPos& p) {
  return p.row >= 0 && p.row < kSoccerRows && p.col >= 0 &&
         p.col < kSoccerCols;
}

int CellIndex(const GridPos& p) { return p.row * kSoccerCols + p.col; }

GridPos CellPos(int cell) {
  return GridPos{cell / kSoccerCols, cell % kSoccerCols};
}

GridPos Rotate(const GridPos& p) {
  return GridPos{kSoccerRows - 1 - p.row, kSoccerCols - 1 - p.col};
}

bool IsGoalRow(int row) { return row == 1 || row == 2; }

// Column a player must step into to score.
int GoalColumn(int player) { return player == 0 ? kSoccerCols : -1; }

BallHolder HolderOf(int player) {
  return player == 0 ? BallHolder::kPlayer0 : BallHolder::kPlayer1;
}

// Re-expresses the state with `perspective` as player 0 (identity for
// perspective 0).
SoccerState ToPerspective(const SoccerState& s, int perspective) {
  if (perspective == 0) return s;
  SoccerState out = s;
  out.players[0] = Rotate(s.players[1]);
  out.players[1] = Rotate(s.players[0]);
  switch (s.holder) {
    case BallHolder::kPlayer0:
      out.holder = BallHolder::kPlayer1;
      break;
    case BallHolder::kPlayer1:
      out.holder = BallHolder::kPlayer0;
      break;
    case BallHolder::kGround:
      out.holder = BallHolder::kGround;
      out.ball = Rotate(s.ball);
      break;
  }
  if (s.winner >= 0) out.winner = 1 - s.winner;
  return out;
}

void CheckPlayer(int perspective) {
  if (perspective != 0 && perspective != 1) {
    throw InvalidArgument("soccer: player must be 0 or 1");
  }
}

std::vector<SoccerState> EnumerateStates() {
  std::vector<SoccerState> states;
  states.reserve(kSoccerNumStates);
  for (int a = 0; a < kSoccerCells; ++a) {
    for (int b = 0; b < kSoccerCells; ++b) {
      if (a == b) continue;
      for (int code = 0; code < kBallCodes; ++code) {
        SoccerState s;
        s.players = {CellPos(a), CellPos(b)};
        if (code == kSoccerCells) {
          s.holder = BallHolder::kPlayer0;
        } else if (code == kSoccerCells + 1) {
          s.holder = BallHolder::kPlayer1;
        } else {
          if (code == a || code == b) continue;
          s.holder = BallHolder::kGround;
          s.ball = CellPos(code);
        }
        states.push_back(s);
      }
    }
  }
  return states;
}

}  // namespace

SoccerState SoccerReset(uint64_t seed) {
  Rng rng(seed);
  SoccerState s;
  s.players = kSoccerPlayerSpawns;
  s.holder = BallHolder::kGround;
  s.ball = kSoccerBallSpawns[static_cast<std::size_t>(UniformInt(rng, 2))];
  return s;
}

int SoccerRotateAction(int action) {
  switch (action) {
    case kNorth:
      return kSouth;
    case kSouth:
      return kNorth;
    case kEast:
      return kWest;
    case kWest:
      return kEast;
    default:
      return action;
  }
}

SoccerOutcome SoccerApply(const SoccerState& state,
                          const std::array<int, 2>& actions, int first_mover,
                          const SoccerConfig& config) {
  if (state.terminal) throw StateError("episode finished");
  for (int a : actions) {
    if (a < 0 || a >= kSoccerActions) {
      throw InvalidArgument("soccer: action out of range");
    }
  }
  SoccerOutcome out;
  SoccerState& s = out.next;
  s = state;
  const std::array<int, 2> order{first_mover, 1 - first_mover};
  for (int k = 0; k < 2; ++k) {
    const int mover = order[k];
    const int other = 1 - mover;
    const int action = actions[static_cast<std::size_t>(mover)];
    if (action == kStay) continue;
    const GridPos from = s.players[mover];
    const GridPos to{from.row + kRowDelta[action], from.col + kColDelta[action]};
    if (!InBounds(to)) {
      if (s.holder == HolderOf(mover) && IsGoalRow(to.row) &&
          to.col == GoalColumn(mover)) {
        s.winner = mover;
        s.terminal = true;
        out.scorer = mover;
        out.rewards[mover] = 1.0;
        out.rewards[other] = -1.0;
        break;
      }
      continue;
    }
    if (to == s.players[other]) {
      // Only a collision into a carrier who has yet to act moves the ball.
      if (s.holder == HolderOf(other) && k == 0) s.holder = HolderOf(mover);
      continue;
    }
    s.players[mover] = to;
    if (s.holder == BallHolder::kGround && s.ball == to) {
      s.holder = HolderOf(mover);
      s.ball = GridPos{};
    }
  }
  ++s.step;
  if (!s.terminal && s.step >= config.horizon) s.terminal = true;
  out.terminal = s.terminal;
  return out;
}

SoccerOutcome SoccerStep(const SoccerState& state,
                         const std::array<int, 2>& actions, Rng& rng,
                         const SoccerConfig& config) {
  if (state.terminal) throw StateError("episode finished");
  const int first = UniformInt(rng, 2);
  return SoccerApply(state, actions, first, config);
}

uint64_t SoccerKey(const SoccerState& state, int perspective) {
  CheckPlayer(perspective);
  const SoccerState s = ToPerspective(state, perspective);
  int ball_code;
  if (s.holder == BallHolder::kPlayer0) {
    ball_code = kSoccerCells;
  } else if (s.holder == BallHolder::kPlayer1) {
    ball_code = kSoccerCells + 1;
  } else {
    ball_code = CellIndex(s.ball);
  }
  return static_cast<uint64_t>(
      (CellIndex(s.players[0]) * kSoccerCells + CellIndex(s.players[1])) *
          kBallCodes +
      ball_code);
}

Observation SoccerEncode(const SoccerState& state, int perspective) {
  CheckPlayer(perspective);
  const SoccerState s = ToPerspective(state, perspective);
  std::array<int, kSoccerCells> category;
  category.fill(kUnoccupied);
  category[static_cast<std::size_t>(CellIndex(s.players[0]))] =
      s.holder == BallHolder::kPlayer0 ? kSelfWithBall : kSelfNoBall;
  category[static_cast<std::size_t>(CellIndex(s.players[1]))] =
      s.holder == BallHolder::kPlayer1 ? kOtherWithBall : kOtherNoBall;
  if (s.holder == BallHolder::kGround) {
    category[static_cast<std::size_t>(CellIndex(s.ball))] = kBallOnGround;
  }
  Observation obs;
  obs.size = kSoccerObservationSize;
  obs.active.reserve(kSoccerCells);
  for (int c = 0; c < kSoccerCells; ++c) {
    obs.active.push_back(c * kSoccerCategories +
                         category[static_cast<std::size_t>(c)]);
  }
  obs.key = SoccerKey(state, perspective);
  return obs;
}

SoccerState SoccerDecode(const Observation& obs, int perspective) {
  CheckPlayer(perspective);
  if (obs.size != kSoccerObservationSize ||
      obs.active.size() != static_cast<std::size_t>(kSoccerCells)) {
    throw InvalidArgument("soccer: not a soccer observation");
  }
  SoccerState s;
  int players_seen = 0;
  for (int32_t idx : obs.active) {
    const int cell = idx / kSoccerCategories;
    const GridPos pos = CellPos(cell);
    switch (idx % kSoccerCategories) {
      case kSelfWithBall:
        s.holder = BallHolder::kPlayer0;
        [[fallthrough]];
      case kSelfNoBall:
        s.players[0] = pos;
        ++players_seen;
        break;
      case kOtherWithBall:
        s.holder = BallHolder::kPlayer1;
        [[fallthrough]];
      case kOtherNoBall:
        s.players[1] = pos;
        ++players_seen;
        break;
      case kBallOnGround:
        s.ball = pos;
        break;
      default:
        break;
    }
  }
  if (players_seen != 2) throw InvalidArgument("soccer: malformed encoding");
  return ToPerspective(s, perspective);
}

bool SoccerStateValid(const SoccerState& s) {
  if (!InBounds(s.players[0]) || !InBounds(s.players[1])) return false;
  if (s.players[0] == s.players[1]) return false;
  if (s.holder == BallHolder::kGround) {
    if (!InBounds(s.ball)) return false;
    if (s.ball == s.players[0] || s.ball == s.players[1]) return false;
  } else if (s.ball != GridPos{}) {
    return false;
  }
  return true;
}

std::string SoccerToString(const SoccerState& s) {
  std::ostringstream os;
  for (int r = 0; r < kSoccerRows; ++r) {
    for (int c = 0; c < kSoccerCols; ++c) {
      const GridPos p{r, c};
      char ch = '.';
      if (p == s.players[0]) {
        ch = s.holder == BallHolder::kPlayer0 ? 'A' : 'a';
      } else if (p == s.players[1]) {
        ch = s.holder == BallHolder::kPlayer1 ? 'B' : 'b';
      } else if (s.holder == BallHolder::kGround && p == s.ball) {
        ch = 'O';
      }
      os << ch;
    }
    os << '\n';
  }
  return os.str();
}

SoccerGame::SoccerGame(SoccerConfig config) : config_(config) {
  static const auto kStates =
      std::make_shared<const std::vector<SoccerState>>(EnumerateStates());
  static const auto kIndex = [] {
    auto index = std::make_shared<std::vector<int>>(kKeySpace, -1);
    for (std::size_t i = 0; i < kStates->size(); ++i) {
      (*index)[SoccerKey((*kStates)[i], 0)] = static_cast<int>(i);
    }
    return std::shared_ptr<const std::vector<int>>(index);
  }();
  states_ = kStates;
  key_to_index_ = kIndex;
  state_ = SoccerReset(0);
}

void SoccerGame::Reset(uint64_t seed) { state_ = SoccerReset(seed); }

Observation SoccerGame::Observe(int player) const {
  return SoccerEncode(state_, player);
}

StepResult SoccerGame::Step(int learner_action, int opponent_action,
                            Rng& rng) {
  const SoccerOutcome out = SoccerStep(
      state_, {learner_action, SoccerRotateAction(opponent_action)}, rng,
      config_);
  state_ = out.next;
  return StepResult{out.rewards, out.terminal};
}

std::unique_ptr<Environment> SoccerGame::Clone() const {
  return std::make_unique<SoccerGame>(*this);
}

const SoccerState& SoccerGame::EnumeratedState(int index) const {
  return (*states_).at(static_cast<std::size_t>(index));
}

Observation SoccerGame::StateObservation(int state, int player) const {
  return SoccerEncode(EnumeratedState(state), player);
}

int SoccerGame::StateIndexOfKey(uint64_t key) const {
  if (key >= key_to_index_->size()) return -1;
  return (*key_to_index_)[key];
}

std::vector<std::pair<int, double>> SoccerGame::InitialDistribution() const {
  std::vector<std::pair<int, double>> init;
  for (const GridPos& ball : kSoccerBallSpawns) {
    SoccerState s;
    s.players = kSoccerPlayerSpawns;
    s.ball = ball;
    init.emplace_back(StateIndexOfKey(SoccerKey(s, 0)), 0.5);
  }
  return init;
}

void SoccerGame::Transitions(int state, int learner_action,
                             int opponent_action,
                             std::vector<Outcome>& out) const {
  SoccerConfig unbounded;
  unbounded.horizon = std::numeric_limits<int>::max();
  const SoccerState& s = EnumeratedState(state);
  const std::array<int, 2> actions{learner_action,
                                   SoccerRotateAction(opponent_action)};
  const std::size_t begin = out.size();
  for (int first = 0; first < 2; ++first) {
    const SoccerOutcome o = SoccerApply(s, actions, first, unbounded);
    const int next =
        o.terminal ? kTerminalState : StateIndexOfKey(SoccerKey(o.next, 0));
    bool merged = false;
    for (std::size_t i = begin; i < out.size(); ++i) {
      if (out[i].next == next && out[i].reward == o.rewards[0]) {
        out[i].prob += 0.5;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(Outcome{next, o.rewards[0], 0.5});
  }
}

}  // namespace qmixlab::envs
