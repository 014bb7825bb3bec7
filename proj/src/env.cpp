#include "brisket/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brisket {
namespace {

double clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

int facing_sign(Facing f) {
    return f == Facing::Right ? 1 : -1;
}

bool overlaps(const Rect& a, const Rect& b) {
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

int elapsed_frames(const MoveSpec& move, const FighterState& fighter) {
    return move.total_frames() - fighter.status_frames_left;
}

} // namespace

Environment::Environment(EnvConfig config, Roster roster)
    : config_(config), roster_(std::move(roster)) {
    if (config_.round_frames <= 0) throw std::invalid_argument("round_frames must be positive");
    if (config_.max_hp <= 0) throw std::invalid_argument("max_hp must be positive");
    if (config_.max_energy <= 0) throw std::invalid_argument("max_energy must be positive");
    if (config_.stage_width <= 0 || config_.stage_height <= 0)
        throw std::invalid_argument("stage dimensions must be positive");
}

GameState Environment::reset(int round_frames, std::uint64_t) const {
    if (round_frames <= 0) throw std::invalid_argument("round_frames must be positive");
    GameState state;
    const double center = config_.stage_width / 2.0;
    for (int i = 0; i < 2; ++i) {
        FighterState& f = state.fighters[i];
        f.hp = config_.max_hp;
        f.energy = 0;
        f.x = i == 0 ? center - config_.spawn_offset : center + config_.spawn_offset;
        f.y = 0.0;
        f.vx = 0.0;
        f.vy = 0.0;
        f.facing = i == 0 ? Facing::Right : Facing::Left;
        f.grounded = true;
        f.status = roster_.neutral_id();
        f.status_frames_left = 0;
        f.move_has_hit = false;
    }
    state.frames_remaining = round_frames;
    state.round_length = round_frames;
    state.outcome = Outcome::Ongoing;
    return state;
}

bool Environment::is_actionable(const GameState& state, int player) const {
    const FighterState& f = state.fighters.at(static_cast<std::size_t>(player));
    return f.status == roster_.neutral_id() || f.status_frames_left == 0;
}

void Environment::start_move(GameState& state, int player, int action) const {
    if (action < 0 || action >= kActionCount)
        throw std::invalid_argument("action id out of range: " + std::to_string(action));
    FighterState& f = state.fighters[static_cast<std::size_t>(player)];
    const FighterState& opp = state.fighters[static_cast<std::size_t>(1 - player)];

    // starting any move re-faces the fighter toward the opponent
    if (opp.x > f.x) f.facing = Facing::Right;
    else if (opp.x < f.x) f.facing = Facing::Left;

    const MoveSpec& move = roster_.move(action);
    if (move.energy_cost > f.energy) {
        f.status = roster_.neutral_id();
        f.status_frames_left = 0;
        f.move_has_hit = false;
        return;
    }
    f.energy -= move.energy_cost;
    f.status = action;
    f.status_frames_left = move.total_frames();
    f.move_has_hit = false;
}

void Environment::apply_move_frame(GameState& state, int player) const {
    FighterState& f = state.fighters[static_cast<std::size_t>(player)];
    const FighterState& opp = state.fighters[static_cast<std::size_t>(1 - player)];
    const int id = f.status;

    if (id == roster_.neutral_id()) {
        // idle fighters track the opponent every frame
        if (opp.x > f.x) f.facing = Facing::Right;
        else if (opp.x < f.x) f.facing = Facing::Left;
        return;
    }

    const int sign = facing_sign(f.facing);
    if (f.grounded) {
        if (id == roster_.walk_forward_id()) f.vx = config_.walk_speed * sign;
        else if (id == roster_.walk_back_id()) f.vx = -config_.walk_speed * sign;
        else if (id == roster_.dash_forward_id()) f.vx = config_.dash_speed * sign;
        else if (id == roster_.backstep_id()) f.vx = -config_.backstep_speed * sign;
    }

    const MoveSpec& move = roster_.move(id);
    const bool is_jump = id == roster_.jump_up_id() || id == roster_.jump_forward_id() ||
                         id == roster_.jump_back_id();
    if (is_jump && f.grounded && elapsed_frames(move, f) == move.startup) {
        f.grounded = false;
        f.vy = config_.jump_velocity;
        if (id == roster_.jump_forward_id()) f.vx = config_.jump_drift * sign;
        else if (id == roster_.jump_back_id()) f.vx = -config_.jump_drift * sign;
        else f.vx = 0.0;
    }
}

void Environment::integrate(GameState& state, int player) const {
    FighterState& f = state.fighters[static_cast<std::size_t>(player)];
    if (!f.grounded) f.vy -= config_.gravity;
    f.x += f.vx;
    f.y += f.vy;

    if (!f.grounded && f.y <= 0.0) {
        f.y = 0.0;
        f.vy = 0.0;
        f.vx = 0.0;
        f.grounded = true;
    }
    f.x = std::clamp(f.x, config_.fighter_half_width,
                     config_.stage_width - config_.fighter_half_width);
    f.y = std::clamp(f.y, 0.0, config_.stage_height);

    const int id = f.status;
    const bool movement_move = id == roster_.walk_forward_id() || id == roster_.walk_back_id() ||
                               id == roster_.dash_forward_id() || id == roster_.backstep_id();
    if (f.grounded && !movement_move) {
        f.vx *= config_.ground_friction;
        if (std::abs(f.vx) < 0.1) f.vx = 0.0;
    }
}

Rect Environment::hurtbox(const FighterState& fighter) const {
    return Rect{fighter.x - config_.fighter_half_width, fighter.y,
                fighter.x + config_.fighter_half_width, fighter.y + config_.fighter_height};
}

Rect Environment::world_hitbox(const MoveSpec& move, const FighterState& fighter) const {
    Rect box = move.hitbox;
    if (fighter.facing == Facing::Left) {
        const double x0 = -box.x1;
        const double x1 = -box.x0;
        box.x0 = x0;
        box.x1 = x1;
    }
    return Rect{fighter.x + box.x0, fighter.y + box.y0, fighter.x + box.x1, fighter.y + box.y1};
}

bool Environment::guard_blocks(const FighterState& defender, AttackLevel level) const {
    if (level == AttackLevel::None) return false;
    const int id = defender.status;
    if (id == roster_.guard_stand_id() || id == roster_.guard_air_id())
        return level == AttackLevel::High || level == AttackLevel::Mid;
    if (id == roster_.guard_crouch_id())
        return level == AttackLevel::Low || level == AttackLevel::Mid;
    return false;
}

void Environment::land_hit(GameState& state, int attacker, int victim, int damage,
                           int energy_to_attacker, int energy_to_victim,
                           double kb_dx, double kb_dy, bool victim_was_mid_move) const {
    FighterState& atk = state.fighters[static_cast<std::size_t>(attacker)];
    FighterState& vic = state.fighters[static_cast<std::size_t>(victim)];

    vic.hp = std::max(0, vic.hp - damage);
    atk.energy = std::min(config_.max_energy, atk.energy + energy_to_attacker);
    vic.energy = std::min(config_.max_energy, vic.energy + energy_to_victim);

    if (damage > 0) {
        vic.vx += kb_dx;
        vic.vy += kb_dy;
        if (vic.grounded && vic.vy > 0.0) vic.grounded = false;

        state.events[static_cast<std::size_t>(attacker)].dealt_damage = true;
        state.events[static_cast<std::size_t>(victim)].took_damage = true;
        if (victim_was_mid_move)
            state.events[static_cast<std::size_t>(attacker)].dealt_counter = true;
    }
}

void Environment::resolve_melee(GameState& state) const {
    // both fighters attack against the same frame-start snapshot, so trades
    // land symmetrically regardless of player order
    const std::array<FighterState, 2> snap = state.fighters;

    struct PendingHit {
        int attacker;
        const MoveSpec* move;
        bool blocked;
        bool victim_mid_move;
    };
    std::vector<PendingHit> hits;

    for (int attacker = 0; attacker < 2; ++attacker) {
        const FighterState& a = snap[static_cast<std::size_t>(attacker)];
        if (a.move_has_hit) continue;
        const MoveSpec& move = roster_.move(a.status);
        if (!move.is_attack() || move.hitbox.empty()) continue;
        const int e = elapsed_frames(move, a);
        if (e < move.startup || e >= move.startup + move.active) continue;

        const int victim = 1 - attacker;
        const FighterState& v = snap[static_cast<std::size_t>(victim)];
        if (!overlaps(world_hitbox(move, a), hurtbox(v))) continue;

        const MoveSpec& victim_move = roster_.move(v.status);
        hits.push_back(PendingHit{attacker, &move, guard_blocks(v, move.attack_level),
                                  victim_move.is_attack() && v.status_frames_left > 0});
    }

    for (const PendingHit& hit : hits) {
        const int victim = 1 - hit.attacker;
        state.fighters[static_cast<std::size_t>(hit.attacker)].move_has_hit = true;
        const int sign = facing_sign(snap[static_cast<std::size_t>(hit.attacker)].facing);
        if (hit.blocked) {
            // blocked hits deal nothing but still feed both energy meters
            land_hit(state, hit.attacker, victim, 0, hit.move->energy_gain_on_hit,
                     hit.move->energy_gain_on_being_hit, 0.0, 0.0, false);
        } else {
            land_hit(state, hit.attacker, victim, hit.move->damage,
                     hit.move->energy_gain_on_hit, hit.move->energy_gain_on_being_hit,
                     hit.move->knockback_dx * sign, hit.move->knockback_dy,
                     hit.victim_mid_move);
        }
    }
}

void Environment::resolve_projectiles(GameState& state) const {
    std::vector<Projectile> kept;
    kept.reserve(state.projectiles.size());
    for (const Projectile& p : state.projectiles) {
        const int victim = 1 - p.owner;
        const FighterState& v = state.fighters[static_cast<std::size_t>(victim)];
        const Rect box{p.x - config_.projectile_half_size, p.y - config_.projectile_half_size,
                       p.x + config_.projectile_half_size, p.y + config_.projectile_half_size};
        if (overlaps(box, hurtbox(v))) {
            const MoveSpec& victim_move = roster_.move(v.status);
            const bool mid_move = victim_move.is_attack() && v.status_frames_left > 0;
            if (guard_blocks(v, AttackLevel::Mid)) {
                land_hit(state, p.owner, victim, 0, p.damage, p.damage / 2, 0.0, 0.0, false);
            } else {
                land_hit(state, p.owner, victim, p.damage, p.damage, p.damage / 2,
                         0.0, 0.0, mid_move);
            }
            continue;  // projectile is spent either way
        }
        if (p.frames_left > 0 && p.x > -config_.stage_width * 0.1 &&
            p.x < config_.stage_width * 1.1) {
            kept.push_back(p);
        }
    }
    state.projectiles = std::move(kept);
}

void Environment::tick(GameState& state, std::optional<int> action0,
                       std::optional<int> action1) const {
    if (state.outcome != Outcome::Ongoing)
        throw std::logic_error("tick on a finished round");

    state.events[0] = PlayerEvents{};
    state.events[1] = PlayerEvents{};

    const std::array<std::optional<int>, 2> actions{action0, action1};
    for (int i = 0; i < 2; ++i) {
        if (!is_actionable(state, i)) continue;
        FighterState& f = state.fighters[static_cast<std::size_t>(i)];
        if (actions[static_cast<std::size_t>(i)].has_value()) {
            start_move(state, i, *actions[static_cast<std::size_t>(i)]);
        } else if (f.status != roster_.neutral_id()) {
            // an expired move with no replacement falls back to neutral
            f.status = roster_.neutral_id();
            f.status_frames_left = 0;
            f.move_has_hit = false;
        }
    }

    for (int i = 0; i < 2; ++i) apply_move_frame(state, i);
    for (int i = 0; i < 2; ++i) integrate(state, i);

    // projectiles leave the hand once the throw's startup completes
    for (int i = 0; i < 2; ++i) {
        const FighterState& f = state.fighters[static_cast<std::size_t>(i)];
        const MoveSpec& move = roster_.move(f.status);
        if (move.category != MoveCategory::ProjectileAttack || !move.projectile.has_value())
            continue;
        if (elapsed_frames(move, f) != move.startup) continue;
        const ProjectileSpec& spec = *move.projectile;
        const int sign = facing_sign(f.facing);
        Projectile p;
        p.owner = i;
        p.x = f.x + config_.projectile_spawn_forward * sign;
        p.y = f.y + config_.projectile_spawn_height;
        p.vx = spec.speed * sign;
        p.vy = 0.0;
        p.damage = spec.damage;
        p.frames_left = static_cast<int>(std::ceil(spec.range / spec.speed));
        state.projectiles.push_back(p);
    }

    for (Projectile& p : state.projectiles) {
        p.x += p.vx;
        p.y += p.vy;
        p.frames_left -= 1;
    }

    resolve_melee(state);
    resolve_projectiles(state);

    for (int i = 0; i < 2; ++i) {
        FighterState& f = state.fighters[static_cast<std::size_t>(i)];
        if (f.status_frames_left > 0) f.status_frames_left -= 1;
    }
    state.frames_remaining -= 1;

    const int hp0 = state.fighters[0].hp;
    const int hp1 = state.fighters[1].hp;
    if (hp0 <= 0 || hp1 <= 0) {
        if (hp0 <= 0 && hp1 <= 0) state.outcome = Outcome::Tie;
        else if (hp1 <= 0) state.outcome = Outcome::P0Win;
        else state.outcome = Outcome::P1Win;
    } else if (state.frames_remaining == 0) {
        if (hp0 > hp1) state.outcome = Outcome::P0Win;
        else if (hp1 > hp0) state.outcome = Outcome::P1Win;
        else state.outcome = Outcome::Tie;
    }
}

Observation Environment::encode(const GameState& state, int perspective) const {
    if (perspective != 0 && perspective != 1)
        throw std::invalid_argument("perspective must be 0 or 1");
    Observation obs{};

    const auto encode_fighter = [&](const FighterState& f, int base) {
        obs[static_cast<std::size_t>(base + 0)] =
            clamp01(static_cast<double>(f.hp) / config_.max_hp);
        obs[static_cast<std::size_t>(base + 1)] =
            clamp01(static_cast<double>(f.energy) / config_.max_energy);
        obs[static_cast<std::size_t>(base + 2)] = clamp01(f.x / config_.stage_width);
        obs[static_cast<std::size_t>(base + 3)] = clamp01(f.y / config_.stage_height);
        obs[static_cast<std::size_t>(base + 4)] =
            clamp01((f.vx + config_.v_max) / (2.0 * config_.v_max));
        obs[static_cast<std::size_t>(base + 5)] =
            clamp01((f.vy + config_.v_max) / (2.0 * config_.v_max));
        obs[static_cast<std::size_t>(base + 6)] =
            0.5 * (f.facing == Facing::Right ? 1.0 : 0.0) + 0.25 * (f.grounded ? 1.0 : 0.0);
    };

    const int self = perspective;
    const int opp = 1 - perspective;
    encode_fighter(state.fighters[static_cast<std::size_t>(self)], 0);
    encode_fighter(state.fighters[static_cast<std::size_t>(opp)], 7);

    obs[static_cast<std::size_t>(kStatusBlockOffset +
                                 state.fighters[static_cast<std::size_t>(self)].status)] = 1.0;
    obs[static_cast<std::size_t>(kStatusBlockOffset + kActionCount +
                                 state.fighters[static_cast<std::size_t>(opp)].status)] = 1.0;

    obs[kTimeSlot] =
        clamp01(static_cast<double>(state.frames_remaining) / state.round_length);

    // two most recent projectiles per side, most recent first; missing slots
    // stay zero
    const FighterState& self_fighter = state.fighters[static_cast<std::size_t>(self)];
    const auto encode_projectiles = [&](int owner, int base) {
        int written = 0;
        for (auto it = state.projectiles.rbegin();
             it != state.projectiles.rend() && written < 2; ++it) {
            if (it->owner != owner) continue;
            const int slot = base + written * 3;
            obs[static_cast<std::size_t>(slot + 0)] =
                clamp01(((it->x - self_fighter.x) / config_.stage_width + 1.0) / 2.0);
            obs[static_cast<std::size_t>(slot + 1)] =
                clamp01(((it->y - self_fighter.y) / config_.stage_height + 1.0) / 2.0);
            obs[static_cast<std::size_t>(slot + 2)] =
                clamp01(static_cast<double>(it->damage) / config_.projectile_dmg_max);
            ++written;
        }
    };
    encode_projectiles(self, kProjectileBlockOffset);
    encode_projectiles(opp, kProjectileBlockOffset + 6);

    return obs;
}

int Environment::outcome_sign(const GameState& state, int perspective) {
    if (state.outcome == Outcome::P0Win) return perspective == 0 ? 1 : -1;
    if (state.outcome == Outcome::P1Win) return perspective == 1 ? 1 : -1;
    return 0;
}

} // namespace brisket
