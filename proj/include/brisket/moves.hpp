#pragma once
#include <optional>
#include <string>
#include <vector>

namespace brisket {

inline constexpr int kActionCount = 56;

enum class MoveCategory {
    Movement,
    Guard,
    Jump,
    NormalAttack,
    SpecialAttack,
    ProjectileAttack,
    Neutral,
};

enum class AttackLevel { High, Mid, Low, None };

// Axis-aligned box in stage units, relative to the fighter origin when used
// as a hitbox (x grows toward the fighter's facing, y grows upward).
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool empty() const { return x1 <= x0 || y1 <= y0; }
};

struct ProjectileSpec {
    double speed = 0.0;  // stage units per frame
    double range = 0.0;  // stage units before expiring
    int damage = 0;
};

struct MoveSpec {
    int id = 0;
    std::string name;
    MoveCategory category = MoveCategory::Neutral;
    int startup = 0;
    int active = 0;
    int recovery = 0;
    int damage = 0;
    int energy_cost = 0;
    int energy_gain_on_hit = 0;
    int energy_gain_on_being_hit = 0;
    AttackLevel attack_level = AttackLevel::None;
    Rect hitbox;
    double knockback_dx = 0.0;
    double knockback_dy = 0.0;
    std::optional<ProjectileSpec> projectile;

    int total_frames() const { return startup + active + recovery; }
    bool is_attack() const {
        return category == MoveCategory::NormalAttack ||
               category == MoveCategory::SpecialAttack ||
               category == MoveCategory::ProjectileAttack;
    }
};

// The 56-action move set. Structural moves (movement, jumps, guards, stances)
// are bound by name; attacks are data-driven.
class Roster {
public:
    explicit Roster(std::vector<MoveSpec> moves);

    const MoveSpec& move(int action_id) const { return moves_[static_cast<std::size_t>(action_id)]; }
    const std::vector<MoveSpec>& moves() const { return moves_; }

    int id_of(const std::string& name) const;

    int neutral_id() const { return neutral_id_; }
    int crouch_id() const { return crouch_id_; }
    int walk_forward_id() const { return walk_forward_id_; }
    int walk_back_id() const { return walk_back_id_; }
    int dash_forward_id() const { return dash_forward_id_; }
    int backstep_id() const { return backstep_id_; }
    int jump_up_id() const { return jump_up_id_; }
    int jump_forward_id() const { return jump_forward_id_; }
    int jump_back_id() const { return jump_back_id_; }
    int guard_stand_id() const { return guard_stand_id_; }
    int guard_crouch_id() const { return guard_crouch_id_; }
    int guard_air_id() const { return guard_air_id_; }

    bool operator==(const Roster& other) const { return equal_moves(other); }

private:
    bool equal_moves(const Roster& other) const;
    void validate_and_bind();

    std::vector<MoveSpec> moves_;
    int neutral_id_ = -1;
    int crouch_id_ = -1;
    int walk_forward_id_ = -1;
    int walk_back_id_ = -1;
    int dash_forward_id_ = -1;
    int backstep_id_ = -1;
    int jump_up_id_ = -1;
    int jump_forward_id_ = -1;
    int jump_back_id_ = -1;
    int guard_stand_id_ = -1;
    int guard_crouch_id_ = -1;
    int guard_air_id_ = -1;
};

// Built-in move set: a balanced all-rounder kit.
Roster builtin_roster();

Roster load_roster(const std::string& path);
void save_roster(const Roster& roster, const std::string& path);

std::string to_string(MoveCategory category);
std::string to_string(AttackLevel level);
MoveCategory move_category_from_string(const std::string& text);
AttackLevel attack_level_from_string(const std::string& text);

} // namespace brisket
