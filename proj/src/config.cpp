#include "brisket/config.hpp"

#include <fstream>
#include <stdexcept>

namespace brisket {
namespace {

void check_keys(const nlohmann::json& j, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw std::invalid_argument(scope + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) throw std::invalid_argument("unknown config key: " + scope + "." + key);
    }
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_env(const nlohmann::json& j, EnvConfig& env) {
    check_keys(j, "env",
               {"max_hp", "max_energy", "round_frames", "stage_width", "stage_height", "v_max",
                "projectile_dmg_max", "gravity", "walk_speed", "dash_speed", "backstep_speed",
                "jump_velocity", "jump_drift", "ground_friction", "spawn_offset",
                "fighter_half_width", "fighter_height", "projectile_half_size",
                "projectile_spawn_forward", "projectile_spawn_height"});
    read_field(j, "max_hp", env.max_hp);
    read_field(j, "max_energy", env.max_energy);
    read_field(j, "round_frames", env.round_frames);
    read_field(j, "stage_width", env.stage_width);
    read_field(j, "stage_height", env.stage_height);
    read_field(j, "v_max", env.v_max);
    read_field(j, "projectile_dmg_max", env.projectile_dmg_max);
    read_field(j, "gravity", env.gravity);
    read_field(j, "walk_speed", env.walk_speed);
    read_field(j, "dash_speed", env.dash_speed);
    read_field(j, "backstep_speed", env.backstep_speed);
    read_field(j, "jump_velocity", env.jump_velocity);
    read_field(j, "jump_drift", env.jump_drift);
    read_field(j, "ground_friction", env.ground_friction);
    read_field(j, "spawn_offset", env.spawn_offset);
    read_field(j, "fighter_half_width", env.fighter_half_width);
    read_field(j, "fighter_height", env.fighter_height);
    read_field(j, "projectile_half_size", env.projectile_half_size);
    read_field(j, "projectile_spawn_forward", env.projectile_spawn_forward);
    read_field(j, "projectile_spawn_height", env.projectile_spawn_height);
}

nlohmann::json env_to_json(const EnvConfig& env) {
    return {{"max_hp", env.max_hp},
            {"max_energy", env.max_energy},
            {"round_frames", env.round_frames},
            {"stage_width", env.stage_width},
            {"stage_height", env.stage_height},
            {"v_max", env.v_max},
            {"projectile_dmg_max", env.projectile_dmg_max},
            {"gravity", env.gravity},
            {"walk_speed", env.walk_speed},
            {"dash_speed", env.dash_speed},
            {"backstep_speed", env.backstep_speed},
            {"jump_velocity", env.jump_velocity},
            {"jump_drift", env.jump_drift},
            {"ground_friction", env.ground_friction},
            {"spawn_offset", env.spawn_offset},
            {"fighter_half_width", env.fighter_half_width},
            {"fighter_height", env.fighter_height},
            {"projectile_half_size", env.projectile_half_size},
            {"projectile_spawn_forward", env.projectile_spawn_forward},
            {"projectile_spawn_height", env.projectile_spawn_height}};
}

void read_diversity(const nlohmann::json& j, DiversityConfig& d) {
    check_keys(j, "diversity",
               {"policy_count", "episodes", "rounds_per_episode", "round_frames",
                "epsilon_start", "epsilon_end", "anneal_episodes", "epochs",
                "policy_learning_rate", "discriminator_learning_rate", "gamma", "target_mode",
                "probability_floor"});
    read_field(j, "policy_count", d.policy_count);
    read_field(j, "episodes", d.episodes);
    read_field(j, "rounds_per_episode", d.rounds_per_episode);
    read_field(j, "round_frames", d.round_frames);
    read_field(j, "epsilon_start", d.epsilon_start);
    read_field(j, "epsilon_end", d.epsilon_end);
    read_field(j, "anneal_episodes", d.anneal_episodes);
    read_field(j, "epochs", d.epochs);
    read_field(j, "policy_learning_rate", d.policy_learning_rate);
    read_field(j, "discriminator_learning_rate", d.discriminator_learning_rate);
    read_field(j, "gamma", d.gamma);
    if (j.contains("target_mode"))
        d.target_mode = target_mode_from_string(j.at("target_mode").get<std::string>());
    read_field(j, "probability_floor", d.probability_floor);
}

nlohmann::json diversity_to_json(const DiversityConfig& d) {
    return {{"policy_count", d.policy_count},
            {"episodes", d.episodes},
            {"rounds_per_episode", d.rounds_per_episode},
            {"round_frames", d.round_frames},
            {"epsilon_start", d.epsilon_start},
            {"epsilon_end", d.epsilon_end},
            {"anneal_episodes", d.anneal_episodes},
            {"epochs", d.epochs},
            {"policy_learning_rate", d.policy_learning_rate},
            {"discriminator_learning_rate", d.discriminator_learning_rate},
            {"gamma", d.gamma},
            {"target_mode", to_string(d.target_mode)},
            {"probability_floor", d.probability_floor}};
}

void read_stage(const nlohmann::json& j, const std::string& scope, RewardStageConfig& s) {
    check_keys(j, scope,
               {"reward", "episodes", "rounds_per_episode", "round_frames", "epsilon", "epochs",
                "learning_rate", "gamma", "target_mode", "eval_rounds"});
    if (j.contains("reward"))
        s.reward = reward_kind_from_string(j.at("reward").get<std::string>());
    read_field(j, "episodes", s.episodes);
    read_field(j, "rounds_per_episode", s.rounds_per_episode);
    read_field(j, "round_frames", s.round_frames);
    read_field(j, "epsilon", s.epsilon);
    read_field(j, "epochs", s.epochs);
    read_field(j, "learning_rate", s.learning_rate);
    read_field(j, "gamma", s.gamma);
    if (j.contains("target_mode"))
        s.target_mode = target_mode_from_string(j.at("target_mode").get<std::string>());
    read_field(j, "eval_rounds", s.eval_rounds);
}

nlohmann::json stage_to_json(const RewardStageConfig& s) {
    return {{"reward", to_string(s.reward)},
            {"episodes", s.episodes},
            {"rounds_per_episode", s.rounds_per_episode},
            {"round_frames", s.round_frames},
            {"epsilon", s.epsilon},
            {"epochs", s.epochs},
            {"learning_rate", s.learning_rate},
            {"gamma", s.gamma},
            {"target_mode", to_string(s.target_mode)},
            {"eval_rounds", s.eval_rounds}};
}

void read_evaluation(const nlohmann::json& j, EvaluationConfig& e) {
    check_keys(j, "evaluation", {"random_states", "matches_per_pair", "round_frames"});
    read_field(j, "random_states", e.random_states);
    read_field(j, "matches_per_pair", e.matches_per_pair);
    read_field(j, "round_frames", e.round_frames);
}

nlohmann::json evaluation_to_json(const EvaluationConfig& e) {
    return {{"random_states", e.random_states},
            {"matches_per_pair", e.matches_per_pair},
            {"round_frames", e.round_frames}};
}

} // namespace

void validate(const EvaluationConfig& config) {
    if (config.random_states <= 0)
        throw std::invalid_argument("random_states must be positive");
    if (config.matches_per_pair <= 0 || config.matches_per_pair % 2 != 0)
        throw std::invalid_argument("matches_per_pair must be a positive even number");
    if (config.round_frames <= 0) throw std::invalid_argument("round_frames must be positive");
}

RunConfig default_run_config() {
    RunConfig config;
    config.finetune.reward = RewardKind::Outcome;
    config.baseline.reward = RewardKind::DamageDealt;
    return config;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    check_keys(j, "config",
               {"seed", "out_dir", "moves_path", "env", "diversity", "finetune", "baseline",
                "evaluation"});
    RunConfig config = default_run_config();
    read_field(j, "seed", config.seed);
    read_field(j, "out_dir", config.out_dir);
    read_field(j, "moves_path", config.moves_path);
    if (j.contains("env")) read_env(j.at("env"), config.env);
    if (j.contains("diversity")) read_diversity(j.at("diversity"), config.diversity);
    if (j.contains("finetune")) read_stage(j.at("finetune"), "finetune", config.finetune);
    if (j.contains("baseline")) read_stage(j.at("baseline"), "baseline", config.baseline);
    if (j.contains("evaluation")) read_evaluation(j.at("evaluation"), config.evaluation);
    return config;
}

nlohmann::json run_config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["seed"] = config.seed;
    j["out_dir"] = config.out_dir;
    j["moves_path"] = config.moves_path;
    j["env"] = env_to_json(config.env);
    j["diversity"] = diversity_to_json(config.diversity);
    j["finetune"] = stage_to_json(config.finetune);
    j["baseline"] = stage_to_json(config.baseline);
    j["evaluation"] = evaluation_to_json(config.evaluation);
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path.string() + ": " + e.what());
    }
    return run_config_from_json(j);
}

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path.string());
    out << run_config_to_json(config).dump(2) << "\n";
}

std::uint64_t config_hash(const RunConfig& config) {
    nlohmann::json j = run_config_to_json(config);
    j.erase("out_dir");
    return fnv1a64(j.dump());
}

} // namespace brisket
