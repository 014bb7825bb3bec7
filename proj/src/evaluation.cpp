#include "brisket/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "brisket/rollout.hpp"

namespace brisket {

ActionFn greedy_fn(const QPolicy& policy) {
    // owns a copy so the returned function cannot dangle when the source
    // policy moves or dies; a policy is ~1MB, nothing next to play cost
    return [policy](const Observation& observation) { return greedy_action(policy, observation); };
}

std::vector<Observation> collect_random_states(const Environment& env, int count,
                                               int round_frames, std::uint64_t seed) {
    if (count <= 0) throw std::invalid_argument("state count must be positive");
    std::vector<Observation> states;
    states.reserve(static_cast<std::size_t>(count));

    int round = 0;
    while (static_cast<int>(states.size()) < count) {
        Rng rng(derive_seed(seed, "round" + std::to_string(round)));
        GameState state = env.reset(round_frames);
        while (state.outcome == Outcome::Ongoing &&
               static_cast<int>(states.size()) < count) {
            std::array<std::optional<int>, 2> actions;
            for (int i = 0; i < 2; ++i) {
                if (!env.is_actionable(state, i)) continue;
                if (i == 0) states.push_back(env.encode(state, 0));
                actions[static_cast<std::size_t>(i)] = rng.next_int(kActionCount);
            }
            env.tick(state, actions[0], actions[1]);
        }
        round += 1;
    }
    return states;
}

DiversityReport diversity_matrix(const std::vector<Observation>& states,
                                 const std::vector<std::string>& names,
                                 const std::vector<ActionFn>& agents) {
    if (names.size() != agents.size())
        throw std::invalid_argument("name count must match agent count");
    if (agents.size() < 2) throw std::invalid_argument("need at least two agents");
    if (states.empty()) throw std::invalid_argument("need at least one state");

    const int n = static_cast<int>(agents.size());
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        actions[static_cast<std::size_t>(i)].reserve(states.size());
        for (const Observation& s : states)
            actions[static_cast<std::size_t>(i)].push_back(agents[static_cast<std::size_t>(i)](s));
    }

    DiversityReport report;
    report.names = names;
    report.state_count = static_cast<int>(states.size());
    report.matrix.assign(static_cast<std::size_t>(n),
                         std::vector<double>(static_cast<std::size_t>(n), 0.0));

    double pair_sum = 0.0;
    int pair_count = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int different = 0;
            for (std::size_t s = 0; s < states.size(); ++s) {
                if (actions[static_cast<std::size_t>(i)][s] !=
                    actions[static_cast<std::size_t>(j)][s])
                    different += 1;
            }
            const double rate =
                static_cast<double>(different) / static_cast<double>(states.size());
            report.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rate;
            report.matrix[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = rate;
            pair_sum += rate;
            pair_count += 1;
        }
    }
    report.mean_pairwise = pair_sum / static_cast<double>(pair_count);
    return report;
}

TournamentReport run_tournament(const Environment& env, const std::vector<std::string>& names,
                                const std::vector<ActionFn>& agents, int matches_per_pair,
                                int round_frames, std::uint64_t seed) {
    if (names.size() != agents.size())
        throw std::invalid_argument("name count must match agent count");
    if (agents.size() < 2) throw std::invalid_argument("need at least two agents");
    if (matches_per_pair <= 0 || matches_per_pair % 2 != 0)
        throw std::invalid_argument("matches_per_pair must be a positive even number");
    if (round_frames <= 0) throw std::invalid_argument("round_frames must be positive");
    {
        std::set<std::string> unique(names.begin(), names.end());
        if (unique.size() != names.size() ||
            std::any_of(names.begin(), names.end(),
                        [](const std::string& n) { return n.empty(); }))
            throw std::invalid_argument("agent names must be unique and non-empty");
    }

    const int n = static_cast<int>(agents.size());
    TournamentReport report;
    report.matches_per_pair = matches_per_pair;
    report.round_frames = round_frames;
    for (const std::string& name : names)
        report.standings.push_back(TournamentRow{name, 0, 0, 0});

    const auto play_match = [&](int p0, int p1, std::uint64_t match_seed) {
        CallbackAgent a0(agents[static_cast<std::size_t>(p0)]);
        CallbackAgent a1(agents[static_cast<std::size_t>(p1)]);
        Rng rng(match_seed);
        const RoundResult round =
            play_round(env, a0, a1, round_frames, rng, false, false);
        return round.outcome;
    };

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PairResult pair;
            pair.first = names[static_cast<std::size_t>(i)];
            pair.second = names[static_cast<std::size_t>(j)];
            const std::string pair_label =
                "pair/" + std::to_string(i) + "/" + std::to_string(j);
            const std::uint64_t pair_seed = derive_seed(seed, pair_label);

            for (int m = 0; m < matches_per_pair; ++m) {
                const std::uint64_t match_seed =
                    derive_seed(pair_seed, "match" + std::to_string(m));
                // even matches: i sits in the player-0 chair; odd: swapped
                const bool swapped = m % 2 == 1;
                const Outcome outcome = swapped ? play_match(j, i, match_seed)
                                                : play_match(i, j, match_seed);

                int sign_i = 0;  // +1 when agent i took the round
                if (outcome == Outcome::P0Win) sign_i = swapped ? -1 : 1;
                else if (outcome == Outcome::P1Win) sign_i = swapped ? 1 : -1;

                if (sign_i > 0) {
                    pair.first_wins += 1;
                    report.standings[static_cast<std::size_t>(i)].wins += 1;
                    report.standings[static_cast<std::size_t>(j)].losses += 1;
                } else if (sign_i < 0) {
                    pair.second_wins += 1;
                    report.standings[static_cast<std::size_t>(j)].wins += 1;
                    report.standings[static_cast<std::size_t>(i)].losses += 1;
                } else {
                    pair.ties += 1;
                    report.standings[static_cast<std::size_t>(i)].ties += 1;
                    report.standings[static_cast<std::size_t>(j)].ties += 1;
                }
            }
            report.pairs.push_back(pair);
        }
    }

    std::sort(report.standings.begin(), report.standings.end(),
              [](const TournamentRow& a, const TournamentRow& b) {
                  if (a.wins != b.wins) return a.wins > b.wins;
                  return a.name < b.name;
              });
    return report;
}

void write_diversity_report(const DiversityReport& report,
                            const std::filesystem::path& json_path,
                            const std::filesystem::path& csv_path) {
    nlohmann::json j;
    j["names"] = report.names;
    j["matrix"] = report.matrix;
    j["mean_pairwise"] = report.mean_pairwise;
    j["state_count"] = report.state_count;
    std::ofstream json_out(json_path);
    if (!json_out) throw std::runtime_error("cannot write " + json_path.string());
    json_out << j.dump(2) << "\n";

    std::ofstream csv_out(csv_path);
    if (!csv_out) throw std::runtime_error("cannot write " + csv_path.string());
    csv_out << "policy";
    for (const std::string& name : report.names) csv_out << "," << name;
    csv_out << "\n";
    for (std::size_t i = 0; i < report.names.size(); ++i) {
        csv_out << report.names[i];
        for (std::size_t k = 0; k < report.names.size(); ++k)
            csv_out << "," << nlohmann::json(report.matrix[i][k]).dump();
        csv_out << "\n";
    }
}

void write_tournament_report(const TournamentReport& report,
                             const std::filesystem::path& json_path,
                             const std::filesystem::path& csv_path) {
    nlohmann::json j;
    j["matches_per_pair"] = report.matches_per_pair;
    j["round_frames"] = report.round_frames;
    j["standings"] = nlohmann::json::array();
    for (const TournamentRow& row : report.standings) {
        j["standings"].push_back({{"name", row.name},
                                  {"wins", row.wins},
                                  {"losses", row.losses},
                                  {"ties", row.ties}});
    }
    j["pairs"] = nlohmann::json::array();
    for (const PairResult& pair : report.pairs) {
        j["pairs"].push_back({{"first", pair.first},
                              {"second", pair.second},
                              {"first_wins", pair.first_wins},
                              {"second_wins", pair.second_wins},
                              {"ties", pair.ties}});
    }
    std::ofstream json_out(json_path);
    if (!json_out) throw std::runtime_error("cannot write " + json_path.string());
    json_out << j.dump(2) << "\n";

    std::ofstream csv_out(csv_path);
    if (!csv_out) throw std::runtime_error("cannot write " + csv_path.string());
    csv_out << "name,wins,losses,ties\n";
    for (const TournamentRow& row : report.standings)
        csv_out << row.name << "," << row.wins << "," << row.losses << "," << row.ties << "\n";
}

} // namespace brisket
