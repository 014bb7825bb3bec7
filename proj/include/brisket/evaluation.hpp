#pragma once
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "brisket/env.hpp"
#include "brisket/policy.hpp"

namespace brisket {

// Evaluation treats every agent as a pure observation -> action function so
// tests can plug in lookup tables next to real policies.
using ActionFn = std::function<int(const Observation&)>;

ActionFn greedy_fn(const QPolicy& policy);

// Observations sampled from player 0's decision points in random-vs-random
// rounds; plays as many rounds as it takes to gather `count`.
std::vector<Observation> collect_random_states(const Environment& env, int count,
                                               int round_frames, std::uint64_t seed);

struct DiversityReport {
    std::vector<std::string> names;
    std::vector<std::vector<double>> matrix;  // pairwise action-disagreement rates
    double mean_pairwise = 0.0;               // mean over unordered distinct pairs
    int state_count = 0;
};

DiversityReport diversity_matrix(const std::vector<Observation>& states,
                                 const std::vector<std::string>& names,
                                 const std::vector<ActionFn>& agents);

struct PairResult {
    std::string first;
    std::string second;
    int first_wins = 0;
    int second_wins = 0;
    int ties = 0;
};

struct TournamentRow {
    std::string name;
    int wins = 0;
    int losses = 0;
    int ties = 0;
};

struct TournamentReport {
    std::vector<TournamentRow> standings;  // wins desc, then name asc
    std::vector<PairResult> pairs;
    int matches_per_pair = 0;
    int round_frames = 0;
};

// Full round robin; matches_per_pair must be even because each pair plays
// half its matches with the sides swapped.
TournamentReport run_tournament(const Environment& env, const std::vector<std::string>& names,
                                const std::vector<ActionFn>& agents, int matches_per_pair,
                                int round_frames, std::uint64_t seed);

void write_diversity_report(const DiversityReport& report,
                            const std::filesystem::path& json_path,
                            const std::filesystem::path& csv_path);

void write_tournament_report(const TournamentReport& report,
                             const std::filesystem::path& json_path,
                             const std::filesystem::path& csv_path);

} // namespace brisket
