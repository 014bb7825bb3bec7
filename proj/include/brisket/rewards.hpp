#pragma once
#include <string>

#include "brisket/env.hpp"

namespace brisket {

// Shaped reward families for the reward-driven training stages. All of them
// put the round outcome on the 1000 scale; the event terms reward particular
// habits between decisions.
enum class RewardKind {
    Outcome,      // 1000 * T
    DamageDealt,  // 1000 * T + 100 * [dealt damage] - 1
    DamageTrade,  // 1000 * T + 100 * [dealt damage] - 50 * [took damage] - 1
    Counter,      // 1000 * T + 100 * [hit opponent mid-move] - 1
};

std::string to_string(RewardKind kind);
RewardKind reward_kind_from_string(const std::string& text);

// outcome: +1 win / -1 loss / 0 otherwise for the rewarded player; events are
// the merged frame events since that player's previous decision.
double shaped_reward(RewardKind kind, int outcome, const PlayerEvents& events);

// Rewards feed a tanh-headed value net, so they are trained on a /1000 scale.
double normalize_reward(double raw);

} // namespace brisket
