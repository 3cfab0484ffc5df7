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

#include "qmixlab/envs/policy.h"

#include <algorithm>
#include <cstdlib>

#include "qmixlab/common/error.h"
#include "qmixlab/envs/commons.h"
#include "qmixlab/envs/soccer.h"

namespace qmixlab::envs {

int Policy::Act(const Observation& obs, Rng& rng) const {
  const std::vector<double> probs = ActionProbabilities(obs);
  return SampleCategorical(probs, rng);
}

int SampleCategorical(std::span<const double> probs, Rng& rng) {
  const double u = Uniform01(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;
}

UniformRandomPolicy::UniformRandomPolicy(int num_actions)
    : num_actions_(num_actions) {
  if (num_actions <= 0) throw InvalidArgument("policy: no actions");
}

std::vector<double> UniformRandomPolicy::ActionProbabilities(
    const Observation&) const {
  return std::vector<double>(static_cast<std::size_t>(num_actions_),
                             1.0 / num_actions_);
}

FixedActionPolicy::FixedActionPolicy(int num_actions, int action)
    : num_actions_(num_actions), action_(action) {
  if (action < 0 || action >= num_actions) {
    throw InvalidArgument("policy: fixed action out of range");
  }
}

std::vector<double> FixedActionPolicy::ActionProbabilities(
    const Observation&) const {
  std::vector<double> p(static_cast<std::size_t>(num_actions_), 0.0);
  p[static_cast<std::size_t>(action_)] = 1.0;
  return p;
}

namespace {

std::vector<double> OneHot(int n, int action) {
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  p[static_cast<std::size_t>(action)] = 1.0;
  return p;
}

// ---------------------------------------------------------------------------
// Soccer heuristics. Observations are in the local frame, so every policy
// plays as player 0 attacking the right-hand goal.

int ColumnsFirst(const GridPos& from, const GridPos& to) {
  if (from.col < to.col) return kEast;
  if (from.col > to.col) return kWest;
  if (from.row < to.row) return kSouth;
  if (from.row > to.row) return kNorth;
  return kStay;
}

int RowsFirst(const GridPos& from, const GridPos& to) {
  if (from.row < to.row) return kSouth;
  if (from.row > to.row) return kNorth;
  if (from.col < to.col) return kEast;
  if (from.col > to.col) return kWest;
  return kStay;
}

// Carry the ball into the goal rows, then straight at the goal.
int Attack(const GridPos& self) {
  if (self.row < 1) return kSouth;
  if (self.row > 2) return kNorth;
  return kEast;
}

GridPos BallPosition(const SoccerState& s) {
  switch (s.holder) {
    case BallHolder::kPlayer0:
      return s.players[0];
    case BallHolder::kPlayer1:
      return s.players[1];
    default:
      return s.ball;
  }
}

int ChaserAction(const SoccerState& s) {
  if (s.holder == BallHolder::kPlayer0) return Attack(s.players[0]);
  return ColumnsFirst(s.players[0], BallPosition(s));
}

class SoccerChaser final : public Policy {
 public:
  std::vector<double> ActionProbabilities(
      const Observation& obs) const override {
    return OneHot(kSoccerActions, ChaserAction(SoccerDecode(obs, 0)));
  }
};

class SoccerNoisyChaser final : public Policy {
 public:
  explicit SoccerNoisyChaser(double noise) : noise_(noise) {}
  std::vector<double> ActionProbabilities(
      const Observation& obs) const override {
    std::vector<double> p(kSoccerActions, noise_ / kSoccerActions);
    p[static_cast<std::size_t>(ChaserAction(SoccerDecode(obs, 0)))] +=
        1.0 - noise_;
    return p;
  }

 private:
  double noise_;
};

// Holds the mouth of its own goal, tracking the ball's row; grabs a loose
// ball only when it is adjacent.
class SoccerCamper final : public Policy {
 public:
  std::vector<double> ActionProbabilities(
      const Observation& obs) const override {
    const SoccerState s = SoccerDecode(obs, 0);
    const GridPos self = s.players[0];
    if (s.holder == BallHolder::kPlayer0) {
      return OneHot(kSoccerActions, Attack(self));
    }
    if (s.holder == BallHolder::kGround &&
        std::abs(s.ball.row - self.row) + std::abs(s.ball.col - self.col) ==
            1) {
      return OneHot(kSoccerActions, ColumnsFirst(self, s.ball));
    }
    const GridPos ball = BallPosition(s);
    const GridPos post{std::clamp(ball.row, 1, 2), 0};
    return OneHot(kSoccerActions, ColumnsFirst(self, post));
  }
};

// Chases a loose ball rows-first; against a carrier, gets between the
// carrier and its own goal and then charges.
class SoccerInterceptor final : public Policy {
 public:
  std::vector<double> ActionProbabilities(
      const Observation& obs) const override {
    const SoccerState s = SoccerDecode(obs, 0);
    const GridPos self = s.players[0];
    if (s.holder == BallHolder::kPlayer0) {
      return OneHot(kSoccerActions, Attack(self));
    }
    if (s.holder == BallHolder::kGround) {
      return OneHot(kSoccerActions, RowsFirst(self, s.ball));
    }
    const GridPos carrier = s.players[1];
    const GridPos guard{carrier.row, std::max(carrier.col - 1, 0)};
    if (self == guard) return OneHot(kSoccerActions, RowsFirst(self, carrier));
    return OneHot(kSoccerActions, RowsFirst(self, guard));
  }
};

// ---------------------------------------------------------------------------
// Commons heuristics over the egocentric window.

struct WindowCell {
  int forward;
  int lateral;
};

int WindowAt(const std::vector<int>& window, int forward, int lateral) {
  const int j = lateral + kCommonsWindowSelfColumn;
  if (forward < 0 || forward >= kCommonsWindowDepth || j < 0 ||
      j >= kCommonsWindowWidth) {
    return kWindowWall;
  }
  return window[static_cast<std::size_t>(forward * kCommonsWindowWidth + j)];
}

bool FindNearest(const std::vector<int>& window, int category,
                 WindowCell* found) {
  int best = -1;
  for (int f = 0; f < kCommonsWindowDepth; ++f) {
    for (int j = 0; j < kCommonsWindowWidth; ++j) {
      if (window[static_cast<std::size_t>(f * kCommonsWindowWidth + j)] !=
          category) {
        continue;
      }
      const int l = j - kCommonsWindowSelfColumn;
      const int cost = f + std::abs(l);
      if (best < 0 || cost < best) {
        best = cost;
        *found = WindowCell{f, l};
      }
    }
  }
  return best >= 0;
}

int Approach(const std::vector<int>& window, const WindowCell& target) {
  if (target.lateral > 0 && WindowAt(window, 0, 1) != kWindowWall) {
    return kStrafeRight;
  }
  if (target.lateral < 0 && WindowAt(window, 0, -1) != kWindowWall) {
    return kStrafeLeft;
  }
  if (target.forward > 0 && WindowAt(window, 1, 0) != kWindowWall) {
    return kMoveForward;
  }
  return kTurnRight;
}

int Explore(const std::vector<int>& window) {
  return WindowAt(window, 1, 0) == kWindowWall ? kTurnRight : kMoveForward;
}

int HarvestAction(const std::vector<int>& window) {
  WindowCell apple{};
  if (FindNearest(window, kWindowApple, &apple)) return Approach(window, apple);
  return Explore(window);
}

class CommonsHarvester final : public Policy {
 public:
  std::vector<double> ActionProbabilities(
      const Observation& obs) const override {
    return OneHot(kCommonsActions, HarvestAction(CommonsDecodeWindow(obs)));
  }
};

// Tags whenever the other player stands in its beam, otherwise hunts it,
// and harvests when it is out of sight.
class CommonsTagger final : public Policy {
 public:
  explicit CommonsTagger(int beam_length) : beam_length_(beam_length) {}
  std::vector<double> ActionProbabilities(
      const Observation& obs) const override {
    const std::vector<int> window = CommonsDecodeWindow(obs);
    for (int f = 1; f <= beam_length_ && f < kCommonsWindowDepth; ++f) {
      const int cat = WindowAt(window, f, 0);
      if (cat == kWindowWall) break;
      if (cat == kWindowOther) return OneHot(kCommonsActions, kTag);
    }
    WindowCell other{};
    if (FindNearest(window, kWindowOther, &other)) {
      return OneHot(kCommonsActions, Approach(window, other));
    }
    return OneHot(kCommonsActions, HarvestAction(window));
  }

 private:
  int beam_length_;
};

}  // namespace

std::vector<std::string> ScriptedOpponentIds(const std::string& env_name) {
  if (env_name == "soccer") {
    return {"random", "chaser", "camper", "noisy_chaser", "interceptor"};
  }
  if (env_name == "commons") return {"random", "harvester", "tagger"};
  if (env_name == "bandit") return {"random"};
  throw InvalidArgument("unknown environment '" + env_name + "'");
}

std::shared_ptr<const Policy> MakeScriptedOpponent(const Environment& env,
                                                   const std::string& id) {
  const std::string env_name = env.name();
  if (id == "random") {
    return std::make_shared<UniformRandomPolicy>(env.opponent_num_actions());
  }
  if (env_name == "soccer") {
    if (id == "chaser") return std::make_shared<SoccerChaser>();
    if (id == "camper") return std::make_shared<SoccerCamper>();
    if (id == "noisy_chaser") return std::make_shared<SoccerNoisyChaser>(0.25);
    if (id == "interceptor") return std::make_shared<SoccerInterceptor>();
  } else if (env_name == "commons") {
    if (id == "harvester") return std::make_shared<CommonsHarvester>();
    if (id == "tagger") {
      const auto* commons = dynamic_cast<const CommonsGame*>(&env);
      const int beam = commons ? commons->config().beam_length : 10;
      return std::make_shared<CommonsTagger>(beam);
    }
  } else if (env_name == "bandit") {
    if (id.rfind("fixed:", 0) == 0) {
      int action = -1;
      try {
        action = std::stoi(id.substr(6));
      } catch (const std::exception&) {
        throw InvalidArgument("unknown opponent id '" + id + "'");
      }
      return std::make_shared<FixedActionPolicy>(env.opponent_num_actions(),
                                                 action);
    }
  }
  throw InvalidArgument("unknown opponent id '" + id + "' for environment '" +
                        env_name + "'");
}

}  // namespace qmixlab::envs
