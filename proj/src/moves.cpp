#include "brisket/moves.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace brisket {

namespace {

using nlohmann::json;

MoveSpec attack(int id, std::string name, MoveCategory cat, AttackLevel level,
                int startup, int active, int recovery, int damage, int cost,
                Rect hitbox, double kb_dx, double kb_dy) {
    MoveSpec m;
    m.id = id;
    m.name = std::move(name);
    m.category = cat;
    m.attack_level = level;
    m.startup = startup;
    m.active = active;
    m.recovery = recovery;
    m.damage = damage;
    m.energy_cost = cost;
    m.energy_gain_on_hit = damage;
    m.energy_gain_on_being_hit = damage / 2;
    m.hitbox = hitbox;
    m.knockback_dx = kb_dx;
    m.knockback_dy = kb_dy;
    return m;
}

MoveSpec normal(int id, std::string name, AttackLevel level, int startup, int active,
                int recovery, int damage, Rect hitbox, double kb_dx = 5.0, double kb_dy = 0.0) {
    return attack(id, std::move(name), MoveCategory::NormalAttack, level, startup, active,
                  recovery, damage, 0, hitbox, kb_dx, kb_dy);
}

MoveSpec special(int id, std::string name, AttackLevel level, int startup, int active,
                 int recovery, int damage, int cost, Rect hitbox, double kb_dx, double kb_dy) {
    return attack(id, std::move(name), MoveCategory::SpecialAttack, level, startup, active,
                  recovery, damage, cost, hitbox, kb_dx, kb_dy);
}

MoveSpec fireball(int id, std::string name, int startup, int active, int recovery,
                  int cost, ProjectileSpec proj) {
    MoveSpec m = attack(id, std::move(name), MoveCategory::ProjectileAttack, AttackLevel::Mid,
                        startup, active, recovery, 0, cost, Rect{}, 0.0, 0.0);
    m.energy_gain_on_hit = proj.damage;
    m.energy_gain_on_being_hit = proj.damage / 2;
    m.projectile = proj;
    return m;
}

MoveSpec stance(int id, std::string name, MoveCategory cat, int frames) {
    MoveSpec m;
    m.id = id;
    m.name = std::move(name);
    m.category = cat;
    m.recovery = frames;
    return m;
}

} // namespace

Roster::Roster(std::vector<MoveSpec> moves) : moves_(std::move(moves)) {
    validate_and_bind();
}

int Roster::id_of(const std::string& name) const {
    for (const auto& m : moves_) {
        if (m.name == name) {
            return m.id;
        }
    }
    throw std::invalid_argument("roster has no move named '" + name + "'");
}

bool Roster::equal_moves(const Roster& other) const {
    if (moves_.size() != other.moves_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < moves_.size(); ++i) {
        const MoveSpec& a = moves_[i];
        const MoveSpec& b = other.moves_[i];
        const bool proj_equal =
            a.projectile.has_value() == b.projectile.has_value() &&
            (!a.projectile ||
             (a.projectile->speed == b.projectile->speed &&
              a.projectile->range == b.projectile->range &&
              a.projectile->damage == b.projectile->damage));
        if (a.id != b.id || a.name != b.name || a.category != b.category ||
            a.startup != b.startup || a.active != b.active || a.recovery != b.recovery ||
            a.damage != b.damage || a.energy_cost != b.energy_cost ||
            a.energy_gain_on_hit != b.energy_gain_on_hit ||
            a.energy_gain_on_being_hit != b.energy_gain_on_being_hit ||
            a.attack_level != b.attack_level || a.hitbox.x0 != b.hitbox.x0 ||
            a.hitbox.y0 != b.hitbox.y0 || a.hitbox.x1 != b.hitbox.x1 ||
            a.hitbox.y1 != b.hitbox.y1 || a.knockback_dx != b.knockback_dx ||
            a.knockback_dy != b.knockback_dy || !proj_equal) {
            return false;
        }
    }
    return true;
}

void Roster::validate_and_bind() {
    if (moves_.size() != kActionCount) {
        throw std::invalid_argument("roster must contain exactly " +
                                    std::to_string(kActionCount) + " moves, got " +
                                    std::to_string(moves_.size()));
    }
    std::set<int> seen;
    for (std::size_t i = 0; i < moves_.size(); ++i) {
        const MoveSpec& m = moves_[i];
        if (m.id != static_cast<int>(i)) {
            throw std::invalid_argument("roster ids must be 0..55 in order; slot " +
                                        std::to_string(i) + " has id " + std::to_string(m.id));
        }
        if (!seen.insert(m.id).second) {
            throw std::invalid_argument("duplicate move id " + std::to_string(m.id));
        }
        if (m.startup < 0 || m.active < 0 || m.recovery < 0 || m.damage < 0 ||
            m.energy_cost < 0) {
            throw std::invalid_argument("move '" + m.name + "' has negative frame/damage data");
        }
        if (m.is_attack() && m.active <= 0) {
            throw std::invalid_argument("attack '" + m.name + "' must have active > 0");
        }
        const bool needs_energy = m.category == MoveCategory::SpecialAttack ||
                                  m.category == MoveCategory::ProjectileAttack;
        if (needs_energy != (m.energy_cost > 0)) {
            throw std::invalid_argument("move '" + m.name +
                                        "': energy_cost > 0 iff special or projectile attack");
        }
        if (m.category == MoveCategory::ProjectileAttack && !m.projectile) {
            throw std::invalid_argument("projectile attack '" + m.name +
                                        "' is missing projectile data");
        }
    }

    const auto bind = [this](int& slot, const char* name, MoveCategory want) {
        slot = id_of(name);
        if (moves_[static_cast<std::size_t>(slot)].category != want) {
            throw std::invalid_argument(std::string("move '") + name +
                                        "' has the wrong category");
        }
    };
    bind(neutral_id_, "neutral", MoveCategory::Neutral);
    bind(crouch_id_, "crouch", MoveCategory::Neutral);
    bind(walk_forward_id_, "walk_forward", MoveCategory::Movement);
    bind(walk_back_id_, "walk_back", MoveCategory::Movement);
    bind(dash_forward_id_, "dash_forward", MoveCategory::Movement);
    bind(backstep_id_, "backstep", MoveCategory::Movement);
    bind(jump_up_id_, "jump_up", MoveCategory::Jump);
    bind(jump_forward_id_, "jump_forward", MoveCategory::Jump);
    bind(jump_back_id_, "jump_back", MoveCategory::Jump);
    bind(guard_stand_id_, "guard_stand", MoveCategory::Guard);
    bind(guard_crouch_id_, "guard_crouch", MoveCategory::Guard);
    bind(guard_air_id_, "guard_air", MoveCategory::Guard);
}

Roster builtin_roster() {
    std::vector<MoveSpec> m;
    m.reserve(kActionCount);

    m.push_back(stance(0, "neutral", MoveCategory::Neutral, 0));
    m.push_back(stance(1, "crouch", MoveCategory::Neutral, 6));
    m.push_back(stance(2, "walk_forward", MoveCategory::Movement, 4));
    m.push_back(stance(3, "walk_back", MoveCategory::Movement, 4));
    m.push_back(stance(4, "dash_forward", MoveCategory::Movement, 10));
    m.push_back(stance(5, "backstep", MoveCategory::Movement, 12));
    m.push_back(stance(6, "jump_up", MoveCategory::Jump, 9));
    m.push_back(stance(7, "jump_forward", MoveCategory::Jump, 9));
    m.push_back(stance(8, "jump_back", MoveCategory::Jump, 9));
    m.push_back(stance(9, "guard_stand", MoveCategory::Guard, 8));
    m.push_back(stance(10, "guard_crouch", MoveCategory::Guard, 8));
    m.push_back(stance(11, "guard_air", MoveCategory::Guard, 8));
    // jump_* use startup as the pre-jump squat; launch happens when startup ends.
    for (int id : {6, 7, 8}) {
        m[static_cast<std::size_t>(id)].startup = 3;
        m[static_cast<std::size_t>(id)].recovery = 6;
    }

    m.push_back(normal(12, "jab", AttackLevel::High, 3, 2, 5, 6, {30, 120, 85, 170}, 4, 0));
    m.push_back(normal(13, "straight", AttackLevel::High, 5, 3, 8, 10, {30, 115, 105, 165}, 6, 0));
    m.push_back(normal(14, "hook", AttackLevel::High, 7, 3, 10, 14, {25, 120, 95, 175}, 8, 0));
    m.push_back(normal(15, "body_blow", AttackLevel::Mid, 5, 3, 9, 9, {30, 60, 90, 120}));
    m.push_back(normal(16, "gut_punch", AttackLevel::Mid, 6, 3, 11, 12, {30, 55, 95, 115}, 6, 0));
    m.push_back(normal(17, "overhead_smash", AttackLevel::High, 11, 4, 14, 18, {35, 100, 110, 180}, 8, 0));
    m.push_back(normal(18, "back_fist", AttackLevel::High, 8, 3, 12, 13, {30, 125, 115, 175}, 7, 0));
    m.push_back(normal(19, "double_palm", AttackLevel::Mid, 9, 4, 13, 16, {30, 70, 105, 140}, 10, 0));
    m.push_back(normal(20, "front_kick", AttackLevel::Mid, 6, 3, 10, 11, {35, 70, 115, 130}, 7, 0));
    m.push_back(normal(21, "roundhouse", AttackLevel::High, 9, 4, 13, 16, {35, 110, 125, 175}, 9, 0));
    m.push_back(normal(22, "low_poke_kick", AttackLevel::Low, 5, 3, 9, 7, {30, 0, 110, 45}, 4, 0));
    m.push_back(normal(23, "shin_kick", AttackLevel::Low, 6, 3, 10, 9, {30, 0, 105, 50}, 5, 0));
    m.push_back(normal(24, "side_kick", AttackLevel::Mid, 8, 3, 12, 14, {35, 75, 130, 135}, 9, 0));
    m.push_back(normal(25, "high_kick", AttackLevel::High, 10, 4, 14, 17, {35, 120, 125, 180}, 9, 0));
    m.push_back(normal(26, "step_kick", AttackLevel::Mid, 7, 3, 12, 12, {40, 60, 140, 120}, 8, 0));
    m.push_back(normal(27, "knee_strike", AttackLevel::Mid, 5, 3, 8, 10, {25, 80, 80, 140}, 5, 0));
    m.push_back(normal(28, "crouch_jab", AttackLevel::Mid, 4, 2, 6, 5, {25, 50, 80, 100}, 3, 0));
    m.push_back(normal(29, "crouch_punch", AttackLevel::Mid, 6, 3, 9, 9, {30, 55, 90, 105}, 5, 0));
    m.push_back(normal(30, "crouch_light_kick", AttackLevel::Low, 4, 2, 7, 6, {30, 0, 95, 35}, 3, 0));
    m.push_back(normal(31, "crouch_mid_kick", AttackLevel::Low, 6, 3, 10, 10, {30, 0, 110, 40}, 5, 0));
    m.push_back(normal(32, "crouch_sweep", AttackLevel::Low, 8, 4, 14, 15, {30, 0, 130, 35}, 9, 0));
    m.push_back(normal(33, "crouch_uppercut", AttackLevel::High, 7, 4, 12, 13, {25, 90, 85, 170}, 6, 8));
    m.push_back(normal(34, "air_jab", AttackLevel::High, 4, 3, 6, 7, {25, 40, 85, 100}, 4, 0));
    m.push_back(normal(35, "air_kick", AttackLevel::High, 6, 4, 8, 11, {30, 20, 105, 80}, 6, 0));
    m.push_back(normal(36, "air_stomp", AttackLevel::Mid, 8, 4, 10, 13, {10, -20, 80, 40}, 5, -4));
    m.push_back(normal(37, "air_knuckle", AttackLevel::High, 7, 3, 9, 12, {25, 50, 95, 110}, 6, 0));
    m.push_back(normal(38, "elbow", AttackLevel::High, 4, 2, 7, 8, {25, 110, 75, 160}, 4, 0));
    m.push_back(normal(39, "hammer_fist", AttackLevel::High, 9, 3, 13, 15, {30, 100, 100, 170}, 8, 0));
    m.push_back(normal(40, "push_kick", AttackLevel::Mid, 7, 3, 11, 10, {35, 70, 120, 130}, 12, 0));
    m.push_back(normal(41, "axe_kick", AttackLevel::High, 12, 4, 15, 19, {30, 100, 105, 185}, 8, 0));
    m.push_back(normal(42, "spin_kick", AttackLevel::High, 10, 4, 14, 17, {35, 105, 135, 175}, 10, 0));
    m.push_back(normal(43, "toe_tap", AttackLevel::Low, 4, 2, 6, 5, {30, 0, 95, 30}, 3, 0));
    m.push_back(normal(44, "heel_stomp", AttackLevel::Low, 7, 3, 11, 11, {25, 0, 90, 35}, 6, 0));
    m.push_back(normal(45, "lunge_punch", AttackLevel::Mid, 9, 4, 14, 15, {45, 80, 150, 140}, 10, 0));

    m.push_back(special(46, "uppercut_surge", AttackLevel::High, 8, 5, 16, 28, 50, {25, 60, 110, 185}, 10, 14));
    m.push_back(special(47, "slide_kick", AttackLevel::Low, 7, 6, 15, 18, 30, {35, 0, 165, 35}, 10, 0));
    m.push_back(special(48, "rising_knee", AttackLevel::Mid, 6, 4, 14, 22, 40, {25, 70, 95, 160}, 8, 12));
    m.push_back(special(49, "power_straight", AttackLevel::Mid, 9, 4, 15, 26, 60, {35, 100, 140, 160}, 14, 0));
    m.push_back(special(50, "spinning_back_kick", AttackLevel::High, 10, 5, 16, 27, 55, {35, 95, 145, 175}, 12, 6));
    m.push_back(special(51, "ground_slam", AttackLevel::Low, 12, 5, 18, 30, 80, {30, 0, 135, 45}, 10, 8));

    m.push_back(fireball(52, "fireball", 10, 2, 16, 40, {10.0, 450.0, 20}));
    m.push_back(fireball(53, "heavy_fireball", 12, 2, 20, 70, {8.0, 450.0, 30}));
    m.push_back(fireball(54, "air_fireball", 9, 2, 14, 40, {10.0, 400.0, 18}));
    m.push_back(fireball(55, "swift_bolt", 8, 2, 12, 25, {14.0, 500.0, 12}));

    return Roster(std::move(m));
}

std::string to_string(MoveCategory category) {
    switch (category) {
    case MoveCategory::Movement: return "movement";
    case MoveCategory::Guard: return "guard";
    case MoveCategory::Jump: return "jump";
    case MoveCategory::NormalAttack: return "normal-attack";
    case MoveCategory::SpecialAttack: return "special-attack";
    case MoveCategory::ProjectileAttack: return "projectile-attack";
    case MoveCategory::Neutral: return "neutral";
    }
    return "neutral";
}

std::string to_string(AttackLevel level) {
    switch (level) {
    case AttackLevel::High: return "high";
    case AttackLevel::Mid: return "mid";
    case AttackLevel::Low: return "low";
    case AttackLevel::None: return "none";
    }
    return "none";
}

MoveCategory move_category_from_string(const std::string& text) {
    if (text == "movement") return MoveCategory::Movement;
    if (text == "guard") return MoveCategory::Guard;
    if (text == "jump") return MoveCategory::Jump;
    if (text == "normal-attack") return MoveCategory::NormalAttack;
    if (text == "special-attack") return MoveCategory::SpecialAttack;
    if (text == "projectile-attack") return MoveCategory::ProjectileAttack;
    if (text == "neutral") return MoveCategory::Neutral;
    throw std::invalid_argument("unknown move category '" + text + "'");
}

AttackLevel attack_level_from_string(const std::string& text) {
    if (text == "high") return AttackLevel::High;
    if (text == "mid") return AttackLevel::Mid;
    if (text == "low") return AttackLevel::Low;
    if (text == "none") return AttackLevel::None;
    throw std::invalid_argument("unknown attack level '" + text + "'");
}

Roster load_roster(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open roster file: " + path);
    }
    std::vector<MoveSpec> moves;
    try {
        json doc = json::parse(in);
        if (!doc.contains("moves") || !doc["moves"].is_array()) {
            throw std::invalid_argument("roster file " + path + " has no 'moves' array");
        }
        for (const auto& record : doc["moves"]) {
            MoveSpec m;
            m.id = record.at("id").get<int>();
            m.name = record.at("name").get<std::string>();
            m.category = move_category_from_string(record.at("category").get<std::string>());
            m.startup = record.at("startup").get<int>();
            m.active = record.at("active").get<int>();
            m.recovery = record.at("recovery").get<int>();
            m.damage = record.at("damage").get<int>();
            m.energy_cost = record.at("energy_cost").get<int>();
            m.energy_gain_on_hit = record.at("energy_gain_on_hit").get<int>();
            m.energy_gain_on_being_hit = record.at("energy_gain_on_being_hit").get<int>();
            m.attack_level =
                attack_level_from_string(record.at("attack_level").get<std::string>());
            const auto& hb = record.at("hitbox");
            m.hitbox = Rect{hb.at("x0").get<double>(), hb.at("y0").get<double>(),
                            hb.at("x1").get<double>(), hb.at("y1").get<double>()};
            const auto& kb = record.at("knockback");
            m.knockback_dx = kb.at("dx").get<double>();
            m.knockback_dy = kb.at("dy").get<double>();
            if (record.contains("projectile") && !record["projectile"].is_null()) {
                const auto& pr = record["projectile"];
                m.projectile = ProjectileSpec{pr.at("speed").get<double>(),
                                              pr.at("range").get<double>(),
                                              pr.at("damage").get<int>()};
            }
            moves.push_back(std::move(m));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument("roster file " + path + " is malformed: " + e.what());
    }
    return Roster(std::move(moves));
}

void save_roster(const Roster& roster, const std::string& path) {
    json records = json::array();
    for (const auto& m : roster.moves()) {
        json record = {
            {"id", m.id},
            {"name", m.name},
            {"category", to_string(m.category)},
            {"startup", m.startup},
            {"active", m.active},
            {"recovery", m.recovery},
            {"damage", m.damage},
            {"energy_cost", m.energy_cost},
            {"energy_gain_on_hit", m.energy_gain_on_hit},
            {"energy_gain_on_being_hit", m.energy_gain_on_being_hit},
            {"attack_level", to_string(m.attack_level)},
            {"hitbox", {{"x0", m.hitbox.x0}, {"y0", m.hitbox.y0}, {"x1", m.hitbox.x1}, {"y1", m.hitbox.y1}}},
            {"knockback", {{"dx", m.knockback_dx}, {"dy", m.knockback_dy}}},
        };
        if (m.projectile) {
            record["projectile"] = {{"speed", m.projectile->speed},
                                    {"range", m.projectile->range},
                                    {"damage", m.projectile->damage}};
        }
        records.push_back(std::move(record));
    }
    json doc = {{"format_version", 1}, {"moves", std::move(records)}};
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write roster file: " + path);
    }
    out << doc.dump(2) << "\n";
}

} // namespace brisket
