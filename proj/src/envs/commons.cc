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

#include "qmixlab/envs/commons.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qmixlab/common/error.h"

namespace qmixlab::envs {
namespace {

constexpr std::array<int, 4> kFacingRow{-1, 0, 1, 0};
constexpr std::array<int, 4> kFacingCol{0, 1, 0, -1};

constexpr std::string_view kDefaultMap =
    "#######################\n"
    "#.....................#\n"
    "#..........A..........#\n"
    "#.........AAA.........#\n"
    "#........AAAAA........#\n"
    "#1......AAAAAAA......2#\n"
    "#........AAAAA........#\n"
    "#.........AAA.........#\n"
    "#..........A..........#\n"
    "#.....................#\n"
    "#######################\n";

void ValidateMap(const CommonsMap& map) {
  if (map.rows <= 0 || map.cols <= 0 ||
      map.tiles.size() != static_cast<std::size_t>(map.rows * map.cols) ||
      map.apple_tile.size() != map.tiles.size()) {
    throw InvalidArgument("commons map: inconsistent dimensions");
  }
  for (int p = 0; p < 2; ++p) {
    const GridPos s = map.spawns[p];
    if (s.row < 0 || s.row >= map.rows || s.col < 0 || s.col >= map.cols) {
      throw InvalidArgument("commons map: spawn tile out of bounds");
    }
    const std::size_t i = static_cast<std::size_t>(s.row * map.cols + s.col);
    if (map.tiles[i] != Tile::kEmpty || map.apple_tile[i]) {
      throw InvalidArgument("commons map: spawn tile overlaps wall or apple");
    }
  }
  if (map.spawns[0] == map.spawns[1]) {
    throw InvalidArgument("commons map: spawn tiles overlap");
  }
  for (std::size_t i = 0; i < map.tiles.size(); ++i) {
    if (map.apple_tile[i] && map.tiles[i] == Tile::kWall) {
      throw InvalidArgument("commons map: apple tile overlaps wall");
    }
  }
}

// Position `forward` cells ahead and `lateral` cells to the right.
GridPos Relative(const GridPos& origin, int facing, int forward, int lateral) {
  const int right = (facing + 1) % 4;
  return GridPos{origin.row + forward * kFacingRow[facing] +
                     lateral * kFacingRow[right],
                 origin.col + forward * kFacingCol[facing] +
                     lateral * kFacingCol[right]};
}

}  // namespace

CommonsMap ParseCommonsMap(std::string_view text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw InvalidArgument("commons map: empty map");

  CommonsMap map;
  map.rows = static_cast<int>(lines.size());
  map.cols = static_cast<int>(lines[0].size());
  if (map.cols == 0) throw InvalidArgument("commons map: empty row");
  map.tiles.assign(static_cast<std::size_t>(map.rows * map.cols), Tile::kEmpty);
  map.apple_tile.assign(map.tiles.size(), false);
  std::array<int, 2> spawn_count{0, 0};
  for (int r = 0; r < map.rows; ++r) {
    const std::string& row = lines[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != map.cols) {
      throw InvalidArgument("commons map: ragged row " + std::to_string(r) +
                            " (length " + std::to_string(row.size()) +
                            ", expected " + std::to_string(map.cols) + ")");
    }
    for (int c = 0; c < map.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r * map.cols + c);
      switch (row[static_cast<std::size_t>(c)]) {
        case '#':
          map.tiles[i] = Tile::kWall;
          break;
        case '.':
          break;
        case 'A':
          map.tiles[i] = Tile::kApple;
          map.apple_tile[i] = true;
          ++map.num_apple_tiles;
          break;
        case '1':
        case '2': {
          const int p = row[static_cast<std::size_t>(c)] - '1';
          map.spawns[p] = GridPos{r, c};
          ++spawn_count[p];
          break;
        }
        default:
          throw InvalidArgument(std::string("commons map: unknown tile '") +
                                row[static_cast<std::size_t>(c)] + "'");
      }
    }
  }
  if (spawn_count[0] != 1 || spawn_count[1] != 1) {
    throw InvalidArgument("commons map: need exactly one '1' and one '2'");
  }
  ValidateMap(map);
  return map;
}

CommonsMap LoadCommonsMap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("commons map not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCommonsMap(buf.str());
}

std::string_view DefaultCommonsMapText() { return kDefaultMap; }

const CommonsMap& DefaultCommonsMap() {
  static const CommonsMap map = ParseCommonsMap(kDefaultMap);
  return map;
}

int CommonsState::AppleCount() const {
  return static_cast<int>(std::count(tiles.begin(), tiles.end(), Tile::kApple));
}

CommonsState CommonsReset(uint64_t seed, const CommonsMap& map) {
  ValidateMap(map);
  Rng rng(seed);
  CommonsState s;
  s.rows = map.rows;
  s.cols = map.cols;
  s.tiles = map.tiles;
  s.apple_tile = map.apple_tile;
  s.spawns = map.spawns;
  for (int p = 0; p < 2; ++p) {
    s.players[p].pos = map.spawns[p];
    s.players[p].facing = UniformInt(rng, 4);
    s.players[p].countdown = 0;
    s.players[p].present = true;
  }
  return s;
}

double CommonsRegrowthProbability(const CommonsState& s, int r, int c,
                                  double rate) {
  int n = 0;
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (s.InBounds(r + dr, c + dc) && s.at(r + dr, c + dc) == Tile::kApple) {
        ++n;
      }
    }
  }
  return std::min(1.0, rate * n);
}

CommonsOutcome CommonsStep(const CommonsState& state,
                           const std::array<int, 2>& actions, Rng& rng,
                           const CommonsConfig& config) {
  if (state.terminal) throw StateError("episode finished");
  for (int a : actions) {
    if (a < 0 || a >= kCommonsActions) {
      throw InvalidArgument("commons: action out of range");
    }
  }
  CommonsOutcome out;
  CommonsState& s = out.next;
  s = state;

  // Players already tagged out count down and sit this step out.
  std::array<bool, 2> acting{};
  for (int p = 0; p < 2; ++p) {
    CommonsPlayer& pl = s.players[p];
    acting[p] = pl.present;
    if (!pl.present && pl.countdown > 0) --pl.countdown;
  }

  // Moves and turns, resolved simultaneously.
  std::array<GridPos, 2> target{s.players[0].pos, s.players[1].pos};
  for (int p = 0; p < 2; ++p) {
    if (!acting[p]) continue;
    CommonsPlayer& pl = s.players[p];
    const int a = actions[static_cast<std::size_t>(p)];
    GridPos to = pl.pos;
    switch (a) {
      case kMoveForward:
        to = Relative(pl.pos, pl.facing, 1, 0);
        break;
      case kMoveBack:
        to = Relative(pl.pos, pl.facing, -1, 0);
        break;
      case kStrafeRight:
        to = Relative(pl.pos, pl.facing, 0, 1);
        break;
      case kStrafeLeft:
        to = Relative(pl.pos, pl.facing, 0, -1);
        break;
      case kTurnLeft:
        pl.facing = (pl.facing + 3) % 4;
        break;
      case kTurnRight:
        pl.facing = (pl.facing + 1) % 4;
        break;
      default:
        break;
    }
    if (!s.InBounds(to.row, to.col) || s.at(to.row, to.col) == Tile::kWall) {
      to = pl.pos;
    }
    target[p] = to;
  }
  // A contested cell (which includes stepping into a player who stays put)
  // or a swap cancels both moves.
  if (acting[0] && acting[1] &&
      (target[0] == target[1] || (target[0] == s.players[1].pos &&
                                  target[1] == s.players[0].pos))) {
    target = {s.players[0].pos, s.players[1].pos};
  }
  for (int p = 0; p < 2; ++p) {
    if (acting[p]) s.players[p].pos = target[p];
  }

  // Harvest.
  for (int p = 0; p < 2; ++p) {
    if (!acting[p]) continue;
    const GridPos pos = s.players[p].pos;
    Tile& t = s.tiles[static_cast<std::size_t>(pos.row * s.cols + pos.col)];
    if (t == Tile::kApple) {
      t = Tile::kEmpty;
      out.apples_picked[p] = 1;
      out.rewards[p] += 1.0;
    }
  }

  // Tag beams fire from post-move positions; walls stop them.
  std::array<bool, 2> hit{false, false};
  for (int p = 0; p < 2; ++p) {
    if (!acting[p] || actions[static_cast<std::size_t>(p)] != kTag) continue;
    const int o = 1 - p;
    if (!acting[o]) continue;
    for (int f = 1; f <= config.beam_length; ++f) {
      const GridPos cell = Relative(s.players[p].pos, s.players[p].facing, f, 0);
      if (!s.InBounds(cell.row, cell.col) ||
          s.at(cell.row, cell.col) == Tile::kWall) {
        break;
      }
      if (cell == s.players[o].pos) {
        hit[o] = true;
        break;
      }
    }
  }
  for (int p = 0; p < 2; ++p) {
    if (!hit[p]) continue;
    s.players[p].present = false;
    s.players[p].countdown = config.tag_duration;
    out.tagged[p] = true;
  }

  // Regrowth, computed from the apple layout before any tile regrows.
  std::vector<double> regrow_prob(s.tiles.size(), 0.0);
  for (int r = 0; r < s.rows; ++r) {
    for (int c = 0; c < s.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r * s.cols + c);
      if (!s.apple_tile[i] || s.tiles[i] != Tile::kEmpty) continue;
      bool occupied = false;
      for (const CommonsPlayer& pl : s.players) {
        if (pl.present && pl.pos == GridPos{r, c}) occupied = true;
      }
      if (occupied) continue;
      regrow_prob[i] = CommonsRegrowthProbability(s, r, c, config.regrowth_rate);
    }
  }
  for (std::size_t i = 0; i < s.tiles.size(); ++i) {
    if (!s.apple_tile[i] || s.tiles[i] != Tile::kEmpty) continue;
    // One draw per candidate tile keeps the stream aligned across layouts.
    const double u = Uniform01(rng);
    if (regrow_prob[i] > 0.0 && u < regrow_prob[i]) {
      s.tiles[i] = Tile::kApple;
      ++out.regrown;
    }
  }

  // Respawn players whose countdown has run out; wait if the tile is taken.
  for (int p = 0; p < 2; ++p) {
    CommonsPlayer& pl = s.players[p];
    if (pl.present || pl.countdown > 0 || hit[p]) continue;
    const GridPos spawn = s.spawns[p];
    const CommonsPlayer& other = s.players[1 - p];
    if (other.present && other.pos == spawn) {
      pl.countdown = 1;
      continue;
    }
    pl.present = true;
    pl.pos = spawn;
    Tile& t = s.tiles[static_cast<std::size_t>(spawn.row * s.cols + spawn.col)];
    if (t == Tile::kApple) t = Tile::kEmpty;
  }

  ++s.step;
  if (s.step >= config.horizon) s.terminal = true;
  out.terminal = s.terminal;
  return out;
}

Observation CommonsEncode(const CommonsState& s, int perspective) {
  if (perspective != 0 && perspective != 1) {
    throw InvalidArgument("commons: player must be 0 or 1");
  }
  const CommonsPlayer& self = s.players[perspective];
  const CommonsPlayer& other = s.players[1 - perspective];
  Observation obs;
  obs.size = kCommonsObservationSize;
  obs.active.reserve(kCommonsWindowDepth * kCommonsWindowWidth);
  for (int f = 0; f < kCommonsWindowDepth; ++f) {
    for (int j = 0; j < kCommonsWindowWidth; ++j) {
      const GridPos cell =
          Relative(self.pos, self.facing, f, j - kCommonsWindowSelfColumn);
      int cat;
      if (!s.InBounds(cell.row, cell.col) ||
          s.at(cell.row, cell.col) == Tile::kWall) {
        cat = kWindowWall;
      } else if (self.present && cell == self.pos) {
        cat = kWindowSelf;
      } else if (other.present && cell == other.pos) {
        cat = kWindowOther;
      } else if (s.at(cell.row, cell.col) == Tile::kApple) {
        cat = kWindowApple;
      } else {
        cat = kWindowEmpty;
      }
      obs.active.push_back((f * kCommonsWindowWidth + j) * kCommonsCategories +
                           cat);
    }
  }
  obs.key = HashActive(obs.active);
  return obs;
}

std::vector<int> CommonsDecodeWindow(const Observation& obs) {
  if (obs.size != kCommonsObservationSize ||
      obs.active.size() !=
          static_cast<std::size_t>(kCommonsWindowDepth * kCommonsWindowWidth)) {
    throw InvalidArgument("commons: not a commons observation");
  }
  std::vector<int> window(obs.active.size(), -1);
  for (int32_t idx : obs.active) {
    window[static_cast<std::size_t>(idx / kCommonsCategories)] =
        idx % kCommonsCategories;
  }
  return window;
}

CommonsGame::CommonsGame(CommonsMap map, CommonsConfig config)
    : map_(std::make_shared<const CommonsMap>(std::move(map))),
      config_(config) {
  ValidateMap(*map_);
  state_ = CommonsReset(0, *map_);
}

void CommonsGame::Reset(uint64_t seed) { state_ = CommonsReset(seed, *map_); }

Observation CommonsGame::Observe(int player) const {
  return CommonsEncode(state_, player);
}

StepResult CommonsGame::Step(int learner_action, int opponent_action,
                             Rng& rng) {
  const CommonsOutcome out =
      CommonsStep(state_, {learner_action, opponent_action}, rng, config_);
  state_ = out.next;
  return StepResult{out.rewards, out.terminal};
}

std::unique_ptr<Environment> CommonsGame::Clone() const {
  return std::make_unique<CommonsGame>(*this);
}

}  // namespace qmixlab::envs
