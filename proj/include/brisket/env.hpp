#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "brisket/moves.hpp"

namespace brisket {

inline constexpr int kObservationSize = 143;
inline constexpr int kBasicBlockSize = 14;
inline constexpr int kStatusBlockOffset = kBasicBlockSize;          // 14
inline constexpr int kTimeSlot = kBasicBlockSize + 2 * kActionCount; // 126
inline constexpr int kProjectileBlockOffset = kTimeSlot + 1;         // 127

using Observation = std::array<double, kObservationSize>;

struct EnvConfig {
    int max_hp = 400;
    int max_energy = 300;
    int round_frames = 3600;
    double stage_width = 960.0;
    double stage_height = 640.0;
    double v_max = 20.0;           // velocity normalization bound for encoding
    int projectile_dmg_max = 40;   // damage normalization bound for encoding
    double gravity = 0.8;
    double walk_speed = 4.0;
    double dash_speed = 9.0;
    double backstep_speed = 7.0;
    double jump_velocity = 15.0;
    double jump_drift = 5.0;
    double ground_friction = 0.8;
    double spawn_offset = 200.0;   // distance of each fighter from stage center
    double fighter_half_width = 30.0;
    double fighter_height = 180.0;
    double projectile_half_size = 15.0;
    double projectile_spawn_forward = 50.0;
    double projectile_spawn_height = 90.0;
};

enum class Facing : std::uint8_t { Left = 0, Right = 1 };

enum class Outcome : std::uint8_t { Ongoing, P0Win, P1Win, Tie };

struct FighterState {
    int hp = 0;
    int energy = 0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    Facing facing = Facing::Right;
    bool grounded = true;
    int status = 0;              // action id of the move currently executing
    int status_frames_left = 0;
    bool move_has_hit = false;   // a single move execution connects at most once
};

struct Projectile {
    int owner = 0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    int damage = 0;
    int frames_left = 0;
};

struct PlayerEvents {
    bool dealt_damage = false;
    bool took_damage = false;
    bool dealt_counter = false;  // dealt damage while the opponent was mid-move

    void merge(const PlayerEvents& other) {
        dealt_damage = dealt_damage || other.dealt_damage;
        took_damage = took_damage || other.took_damage;
        dealt_counter = dealt_counter || other.dealt_counter;
    }
};

struct GameState {
    std::array<FighterState, 2> fighters;
    std::vector<Projectile> projectiles;  // ordered, most recent last
    int frames_remaining = 0;
    int round_length = 0;
    Outcome outcome = Outcome::Ongoing;
    std::array<PlayerEvents, 2> events;
};

// Deterministic frame-stepped two-fighter arena. One instance per thread of
// play; instances share no mutable state.
class Environment {
public:
    Environment(EnvConfig config, Roster roster);

    const EnvConfig& config() const { return config_; }
    const Roster& roster() const { return roster_; }

    // Both fighters at full hp, zero energy, neutral status, symmetric spawns
    // facing each other. The seed is accepted for interface stability; the
    // initial state does not depend on it.
    GameState reset(int round_frames, std::uint64_t seed = 0) const;
    GameState reset() const { return reset(config_.round_frames); }

    // Advances exactly one frame. Supplied actions are consumed only at
    // actionable frames; a move whose energy cost exceeds the fighter's
    // energy downgrades to neutral.
    void tick(GameState& state, std::optional<int> action0, std::optional<int> action1) const;

    bool is_actionable(const GameState& state, int player) const;

    Observation encode(const GameState& state, int perspective) const;

    // T(s): +1 if perspective won, -1 if it lost, 0 while ongoing or tied.
    static int outcome_sign(const GameState& state, int perspective);

private:
    void start_move(GameState& state, int player, int action) const;
    void apply_move_frame(GameState& state, int player) const;
    void integrate(GameState& state, int player) const;
    void resolve_melee(GameState& state) const;
    void resolve_projectiles(GameState& state) const;
    Rect hurtbox(const FighterState& fighter) const;
    Rect world_hitbox(const MoveSpec& move, const FighterState& fighter) const;
    bool guard_blocks(const FighterState& defender, AttackLevel level) const;
    void land_hit(GameState& state, int attacker, int victim, int damage,
                  int energy_to_attacker, int energy_to_victim,
                  double kb_dx, double kb_dy, bool victim_was_mid_move) const;

    EnvConfig config_;
    Roster roster_;
};

} // namespace brisket
