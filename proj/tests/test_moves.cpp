#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <string>

#include "brisket/moves.hpp"

using namespace brisket;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_SUITE("moves") {
    TEST_CASE("built-in roster has 56 moves with ids in order") {
        const Roster roster = builtin_roster();
        CHECK(roster.moves().size() == kActionCount);
        for (int i = 0; i < kActionCount; ++i) {
            CHECK(roster.move(i).id == i);
            CHECK(!roster.move(i).name.empty());
        }
        std::set<std::string> names;
        for (const MoveSpec& m : roster.moves()) names.insert(m.name);
        CHECK(names.size() == kActionCount);  // names unique
    }

    TEST_CASE("structural moves are bound by name with the right categories") {
        const Roster roster = builtin_roster();
        CHECK(roster.move(roster.neutral_id()).name == "neutral");
        CHECK(roster.move(roster.neutral_id()).total_frames() == 0);
        CHECK(roster.move(roster.crouch_id()).category == MoveCategory::Neutral);
        CHECK(roster.move(roster.walk_forward_id()).category == MoveCategory::Movement);
        CHECK(roster.move(roster.walk_back_id()).category == MoveCategory::Movement);
        CHECK(roster.move(roster.dash_forward_id()).category == MoveCategory::Movement);
        CHECK(roster.move(roster.backstep_id()).category == MoveCategory::Movement);
        CHECK(roster.move(roster.jump_up_id()).category == MoveCategory::Jump);
        CHECK(roster.move(roster.jump_forward_id()).category == MoveCategory::Jump);
        CHECK(roster.move(roster.jump_back_id()).category == MoveCategory::Jump);
        CHECK(roster.move(roster.guard_stand_id()).category == MoveCategory::Guard);
        CHECK(roster.move(roster.guard_crouch_id()).category == MoveCategory::Guard);
        CHECK(roster.move(roster.guard_air_id()).category == MoveCategory::Guard);
    }

    TEST_CASE("attack invariants hold for every move") {
        const Roster roster = builtin_roster();
        for (const MoveSpec& m : roster.moves()) {
            CHECK(m.startup >= 0);
            CHECK(m.active >= 0);
            CHECK(m.recovery >= 0);
            if (m.is_attack()) {
                CHECK(m.active > 0);
                CHECK(m.attack_level != AttackLevel::None);
            } else {
                CHECK(m.damage == 0);
            }
            const bool needs_energy = m.category == MoveCategory::SpecialAttack ||
                                      m.category == MoveCategory::ProjectileAttack;
            CHECK((m.energy_cost > 0) == needs_energy);
            if (m.category == MoveCategory::ProjectileAttack) {
                REQUIRE(m.projectile.has_value());
                CHECK(m.projectile->speed > 0);
                CHECK(m.projectile->range > 0);
                CHECK(m.projectile->damage > 0);
                CHECK(m.damage == 0);  // damage rides on the projectile
            }
            if (m.category == MoveCategory::NormalAttack ||
                m.category == MoveCategory::SpecialAttack) {
                CHECK(m.damage > 0);
                CHECK(!m.hitbox.empty());
            }
        }
    }

    TEST_CASE("hits feed the attacker their damage and the victim half") {
        const Roster roster = builtin_roster();
        for (const MoveSpec& m : roster.moves()) {
            if (m.category == MoveCategory::NormalAttack ||
                m.category == MoveCategory::SpecialAttack) {
                CHECK(m.energy_gain_on_hit == m.damage);
                CHECK(m.energy_gain_on_being_hit == m.damage / 2);
            }
            if (m.category == MoveCategory::ProjectileAttack) {
                CHECK(m.energy_gain_on_hit == m.projectile->damage);
                CHECK(m.energy_gain_on_being_hit == m.projectile->damage / 2);
            }
        }
    }

    TEST_CASE("save and reload round-trips the roster exactly") {
        const Roster roster = builtin_roster();
        const std::string path = temp_path("brisket_roster_roundtrip.json");
        save_roster(roster, path);
        const Roster loaded = load_roster(path);
        CHECK(loaded == roster);
        std::remove(path.c_str());
    }

    TEST_CASE("the shipped move table matches the built-in roster") {
        const std::string path = std::string(BRISKET_DATA_DIR) + "/moves.json";
        const Roster loaded = load_roster(path);
        CHECK(loaded == builtin_roster());
    }

    TEST_CASE("missing roster files raise an error naming the path") {
        try {
            load_roster("/nonexistent/brisket-moves.json");
            FAIL("expected an exception");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("/nonexistent/brisket-moves.json") !=
                  std::string::npos);
        }
    }

    TEST_CASE("roster validation rejects structural damage") {
        const Roster good = builtin_roster();

        SUBCASE("wrong move count") {
            std::vector<MoveSpec> moves(good.moves().begin(), good.moves().end() - 1);
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
        SUBCASE("ids out of order") {
            std::vector<MoveSpec> moves = good.moves();
            std::swap(moves[3].id, moves[4].id);
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
        SUBCASE("attack without active frames") {
            std::vector<MoveSpec> moves = good.moves();
            moves[12].active = 0;
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
        SUBCASE("normal attack with energy cost") {
            std::vector<MoveSpec> moves = good.moves();
            moves[12].energy_cost = 10;
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
        SUBCASE("projectile attack without projectile data") {
            std::vector<MoveSpec> moves = good.moves();
            moves[52].projectile.reset();
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
        SUBCASE("renamed structural move") {
            std::vector<MoveSpec> moves = good.moves();
            moves[0].name = "idle";
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
        SUBCASE("negative frame data") {
            std::vector<MoveSpec> moves = good.moves();
            moves[13].startup = -1;
            CHECK_THROWS_AS(Roster(std::move(moves)), std::invalid_argument);
        }
    }
}
