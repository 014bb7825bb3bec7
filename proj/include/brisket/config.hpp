#pragma once
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "brisket/diversity.hpp"
#include "brisket/env.hpp"
#include "brisket/pipelines.hpp"

namespace brisket {

struct EvaluationConfig {
    int random_states = 1000;
    int matches_per_pair = 2;
    int round_frames = 3600;
};

void validate(const EvaluationConfig& config);

struct RunConfig {
    std::uint64_t seed = 1;
    std::string out_dir;     // never hashed: where a run lands must not change it
    std::string moves_path;  // empty -> built-in move table
    EnvConfig env;
    DiversityConfig diversity;
    RewardStageConfig finetune;
    RewardStageConfig baseline;
    EvaluationConfig evaluation;
};

RunConfig default_run_config();

// Strict parse: unknown keys anywhere are an error so config typos fail
// loudly instead of silently running defaults. Absent keys keep defaults.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& config, const std::filesystem::path& path);

// FNV-1a over the canonical serialization with out_dir removed; identifies
// the run's behavior-relevant settings in checkpoint metadata.
std::uint64_t config_hash(const RunConfig& config);

} // namespace brisket
