#include "brisket/rewards.hpp"

#include <stdexcept>

namespace brisket {

std::string to_string(RewardKind kind) {
    switch (kind) {
    case RewardKind::Outcome: return "outcome";
    case RewardKind::DamageDealt: return "damage_dealt";
    case RewardKind::DamageTrade: return "damage_trade";
    case RewardKind::Counter: return "counter";
    }
    throw std::logic_error("unknown reward kind");
}

RewardKind reward_kind_from_string(const std::string& text) {
    if (text == "outcome") return RewardKind::Outcome;
    if (text == "damage_dealt") return RewardKind::DamageDealt;
    if (text == "damage_trade") return RewardKind::DamageTrade;
    if (text == "counter") return RewardKind::Counter;
    throw std::invalid_argument("unknown reward kind: " + text);
}

double shaped_reward(RewardKind kind, int outcome, const PlayerEvents& events) {
    const double base = 1000.0 * outcome;
    switch (kind) {
    case RewardKind::Outcome:
        return base;
    case RewardKind::DamageDealt:
        return base + (events.dealt_damage ? 100.0 : 0.0) - 1.0;
    case RewardKind::DamageTrade:
        return base + (events.dealt_damage ? 100.0 : 0.0) - (events.took_damage ? 50.0 : 0.0) -
               1.0;
    case RewardKind::Counter:
        return base + (events.dealt_counter ? 100.0 : 0.0) - 1.0;
    }
    throw std::logic_error("unknown reward kind");
}

double normalize_reward(double raw) {
    return raw / 1000.0;
}

} // namespace brisket
