#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brisket/config.hpp"
#include "brisket/diversity.hpp"
#include "brisket/evaluation.hpp"
#include "brisket/persistence.hpp"
#include "brisket/pipelines.hpp"
#include "brisket/rollout.hpp"

namespace fs = std::filesystem;
using namespace brisket;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "run configuration JSON")->required();
    cmd->add_option("--out", opts.out_dir,
                    "output directory (falls back to config out_dir, then $BRISKET_OUT)");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--jobs", opts.jobs, "worker threads for round collection")
        ->check(CLI::Range(1, 256));
}

// --out flag > config.out_dir > BRISKET_OUT; all empty is a config error.
fs::path resolve_out_dir(const CommonOpts& opts, const RunConfig& config) {
    std::string dir = opts.out_dir;
    if (dir.empty()) dir = config.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("BRISKET_OUT")) dir = env;
    }
    if (dir.empty())
        throw std::invalid_argument(
            "no output directory: pass --out, set out_dir in the config, or set BRISKET_OUT");
    fs::create_directories(dir);
    return fs::path(dir);
}

RunConfig load_resolved_config(const CommonOpts& opts) {
    RunConfig config = load_run_config(opts.config_path);
    if (opts.seed) config.seed = *opts.seed;
    return config;
}

Roster roster_for(const RunConfig& config) {
    if (config.moves_path.empty()) return builtin_roster();
    return load_roster(config.moves_path);
}

Environment make_env(const RunConfig& config) {
    return Environment(config.env, roster_for(config));
}

CheckpointMeta meta_for(const RunConfig& config, const std::string& stage, int policy_id,
                        int episode) {
    CheckpointMeta meta;
    meta.training_stage = stage;
    meta.policy_id = policy_id;
    meta.episode = episode;
    meta.seed = config.seed;
    meta.config_hash = config_hash(config);
    return meta;
}

nlohmann::json stage_episode_to_json(const StageEpisode& m) {
    return {{"episode", m.episode},
            {"mean_loss", m.mean_loss},
            {"mean_reward", m.mean_reward},
            {"wins", m.wins},
            {"losses", m.losses},
            {"ties", m.ties},
            {"eval",
             {{"mean_reward", m.eval.mean_reward},
              {"wins", m.eval.wins},
              {"losses", m.eval.losses},
              {"ties", m.eval.ties}}}};
}

QPolicy load_policy(const fs::path& path) {
    QPolicy policy;
    policy.net = load_net(path);
    if (policy.net.input_size() != kPolicyInputSize || policy.net.output_size() != 1)
        throw std::invalid_argument(path.string() + ": not a policy net (expected " +
                                    std::to_string(kPolicyInputSize) + " inputs, 1 output)");
    policy.adam = make_adam(policy.net);
    return policy;
}

struct NamedAgents {
    std::vector<std::string> names;
    std::vector<QPolicy> policies;
};

NamedAgents parse_agent_specs(const std::vector<std::string>& specs) {
    NamedAgents agents;
    for (const std::string& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
            throw std::invalid_argument("agent spec must be name=weights.json: " + spec);
        agents.names.push_back(spec.substr(0, eq));
        agents.policies.push_back(load_policy(spec.substr(eq + 1)));
    }
    return agents;
}

std::vector<ActionFn> greedy_agents(const NamedAgents& agents) {
    std::vector<ActionFn> fns;
    fns.reserve(agents.policies.size());
    for (const QPolicy& p : agents.policies) fns.push_back(greedy_fn(p));
    return fns;
}

int run_train_diversity(const CommonOpts& opts) {
    const RunConfig config = load_resolved_config(opts);
    const Environment env = make_env(config);
    const fs::path out = resolve_out_dir(opts, config);
    save_run_config(config, out / "config.json");

    const fs::path stage_dir = out / "diversity";
    fs::create_directories(stage_dir / "discriminator");
    for (int i = 0; i < config.diversity.policy_count; ++i)
        fs::create_directories(stage_dir / ("policy" + std::to_string(i)));
    MetricsWriter metrics(stage_dir / "metrics.jsonl");

    const EpisodeSink sink = [&](const EpisodeMetrics& m, const std::vector<QPolicy>& policies,
                                 const Discriminator& discriminator) {
        metrics.write({{"episode", m.episode},
                       {"epsilon", m.epsilon},
                       {"mean_diversity_reward", m.mean_diversity_reward},
                       {"transition_count", m.transition_count},
                       {"rounds_per_policy", m.rounds_per_policy},
                       {"policy_loss", m.policy_loss},
                       {"discriminator",
                        {{"train_loss", m.discriminator.train_loss},
                         {"val_accuracy", m.discriminator.val_accuracy},
                         {"test_accuracy", m.discriminator.test_accuracy},
                         {"train_count", m.discriminator.train_count},
                         {"val_count", m.discriminator.val_count},
                         {"test_count", m.discriminator.test_count}}}});

        const std::string ep = "ep" + std::to_string(m.episode) + ".json";
        for (std::size_t i = 0; i < policies.size(); ++i) {
            save_checkpoint(policies[i].net,
                            meta_for(config, "diversity", static_cast<int>(i), m.episode),
                            stage_dir / ("policy" + std::to_string(i)) / ep);
        }
        save_checkpoint(discriminator.net, meta_for(config, "diversity", -1, m.episode),
                        stage_dir / "discriminator" / ep);
        std::cout << "episode " << m.episode << ": epsilon=" << m.epsilon
                  << " transitions=" << m.transition_count
                  << " disc_val_acc=" << m.discriminator.val_accuracy << std::endl;
    };

    const DiversityResult result =
        run_diversity(env, config.diversity, config.seed, &sink, opts.jobs);

    const int last = config.diversity.episodes - 1;
    for (std::size_t i = 0; i < result.policies.size(); ++i) {
        save_checkpoint(result.policies[i].net,
                        meta_for(config, "diversity", static_cast<int>(i), last),
                        stage_dir / ("policy" + std::to_string(i)) / "final.json");
    }
    save_checkpoint(result.discriminator.net, meta_for(config, "diversity", -1, last),
                    stage_dir / "discriminator" / "final.json");
    std::cout << "wrote " << result.policies.size() << " policies to " << stage_dir.string()
              << std::endl;
    return 0;
}

int run_finetune(const CommonOpts& opts, const std::string& in_dir) {
    const RunConfig config = load_resolved_config(opts);
    const Environment env = make_env(config);
    const fs::path out = resolve_out_dir(opts, config);
    save_run_config(config, out / "config.json");

    const fs::path in = fs::path(in_dir) / "diversity";
    if (!fs::exists(in))
        throw std::invalid_argument("no diversity stage under --in directory: " + in.string());

    const fs::path stage_dir = out / "finetune";
    fs::create_directories(stage_dir);
    MetricsWriter metrics(stage_dir / "metrics.jsonl");

    for (int k = 0; k < config.diversity.policy_count; ++k) {
        const fs::path weight_path = in / ("policy" + std::to_string(k)) / "final.json";
        const QPolicy start = load_policy(weight_path);
        const fs::path policy_dir = stage_dir / ("policy" + std::to_string(k));
        fs::create_directories(policy_dir);

        const StageSink sink = [&](const StageEpisode& m, const QPolicy& policy) {
            nlohmann::json record = stage_episode_to_json(m);
            record["policy_id"] = k;
            metrics.write(record);
            save_checkpoint(policy.net, meta_for(config, "finetune", k, m.episode),
                            policy_dir / ("ep" + std::to_string(m.episode) + ".json"));
        };

        const StageResult result =
            finetune_policy(env, start, config.finetune, config.seed, k, &sink, opts.jobs);
        save_checkpoint(result.policy.net,
                        meta_for(config, "finetune", k, result.best_episode),
                        policy_dir / "final.json");
        const StageEpisode& best =
            result.episodes[static_cast<std::size_t>(result.best_episode)];
        std::cout << "policy " << k << ": best episode " << result.best_episode << " ("
                  << best.eval.wins << "/" << (best.eval.wins + best.eval.losses + best.eval.ties)
                  << " eval wins)" << std::endl;
    }
    std::cout << "wrote fine-tuned policies to " << stage_dir.string() << std::endl;
    return 0;
}

int run_train_baseline(const CommonOpts& opts, const std::string& reward_name) {
    const RunConfig base = load_resolved_config(opts);
    RunConfig config = base;
    config.baseline.reward = reward_kind_from_string(reward_name);
    const Environment env = make_env(config);
    const fs::path out = resolve_out_dir(opts, config);
    save_run_config(config, out / "config.json");

    const fs::path stage_dir = out / "baseline" / to_string(config.baseline.reward);
    fs::create_directories(stage_dir);
    MetricsWriter metrics(stage_dir / "metrics.jsonl");
    const std::string stage_name = "baseline/" + to_string(config.baseline.reward);

    const StageSink sink = [&](const StageEpisode& m, const QPolicy& policy) {
        metrics.write(stage_episode_to_json(m));
        save_checkpoint(policy.net, meta_for(config, stage_name, 0, m.episode),
                        stage_dir / ("ep" + std::to_string(m.episode) + ".json"));
    };

    const StageResult result =
        train_baseline(env, config.baseline, config.seed, &sink, opts.jobs);
    save_checkpoint(result.policy.net,
                    meta_for(config, stage_name, 0, result.best_episode),
                    stage_dir / "final.json");
    std::cout << "wrote baseline policy to " << (stage_dir / "final.json").string()
              << std::endl;
    return 0;
}

int run_eval_diversity(const CommonOpts& opts, const std::vector<std::string>& agent_specs) {
    const RunConfig config = load_resolved_config(opts);
    const Environment env = make_env(config);
    const fs::path out = resolve_out_dir(opts, config);
    validate(config.evaluation);

    const NamedAgents agents = parse_agent_specs(agent_specs);
    const std::vector<Observation> states =
        collect_random_states(env, config.evaluation.random_states,
                              config.evaluation.round_frames,
                              derive_seed(config.seed, "eval/random-states"));
    const DiversityReport report =
        diversity_matrix(states, agents.names, greedy_agents(agents));
    write_diversity_report(report, out / "diversity_report.json",
                           out / "diversity_report.csv");
    std::cout << "mean pairwise disagreement over " << report.state_count
              << " states: " << report.mean_pairwise << "\n"
              << "wrote " << (out / "diversity_report.json").string() << std::endl;
    return 0;
}

int run_tournament_cmd(const CommonOpts& opts, const std::vector<std::string>& agent_specs) {
    const RunConfig config = load_resolved_config(opts);
    const Environment env = make_env(config);
    const fs::path out = resolve_out_dir(opts, config);
    validate(config.evaluation);

    const NamedAgents agents = parse_agent_specs(agent_specs);
    const TournamentReport report = run_tournament(
        env, agents.names, greedy_agents(agents), config.evaluation.matches_per_pair,
        config.evaluation.round_frames, derive_seed(config.seed, "tournament"));
    write_tournament_report(report, out / "tournament.json", out / "tournament.csv");
    for (const TournamentRow& row : report.standings)
        std::cout << row.name << ": " << row.wins << "W/" << row.losses << "L/" << row.ties
                  << "T\n";
    std::cout << "wrote " << (out / "tournament.json").string() << std::endl;
    return 0;
}

int run_replay(const CommonOpts& opts, const std::string& p0_path, const std::string& p1_path,
               const std::string& replay_path) {
    const RunConfig config = load_resolved_config(opts);
    const Environment env = make_env(config);

    const QPolicy policy0 = load_policy(p0_path);
    const QPolicy policy1 = load_policy(p1_path);

    std::ofstream replay_out(replay_path);
    if (!replay_out) throw std::runtime_error("cannot write replay file: " + replay_path);

    // capture the observation each player acted on, then log the line after
    // the tick so the frame's events are known
    std::array<Observation, 2> last_obs{};
    const FrameHook hook = [&](int frame, const GameState& state,
                               const std::array<std::optional<int>, 2>& actions) {
        for (int i = 0; i < 2; ++i) {
            if (!actions[static_cast<std::size_t>(i)].has_value()) continue;
            write_replay_line(replay_out, frame, i, last_obs[static_cast<std::size_t>(i)],
                              *actions[static_cast<std::size_t>(i)],
                              state.events[static_cast<std::size_t>(i)]);
        }
    };

    class RecordingAgent : public Agent {
    public:
        RecordingAgent(const QPolicy& policy, Observation& slot) : policy_(policy), slot_(slot) {}
        int choose(const Observation& observation, Rng&) override {
            slot_ = observation;
            return greedy_action(policy_, observation);
        }

    private:
        const QPolicy& policy_;
        Observation& slot_;
    };

    RecordingAgent agent0(policy0, last_obs[0]);
    RecordingAgent agent1(policy1, last_obs[1]);
    Rng rng(derive_seed(config.seed, "replay"));
    const RoundResult result = play_round(env, agent0, agent1, config.env.round_frames, rng,
                                          false, false, &hook);

    const char* verdict = result.outcome == Outcome::P0Win  ? "p0 wins"
                          : result.outcome == Outcome::P1Win ? "p1 wins"
                                                             : "tie";
    std::cout << verdict << " after " << result.frames << " frames; wrote " << replay_path
              << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diversity-driven fighting game policy training"};
    app.require_subcommand(1);

    CommonOpts diversity_opts;
    CLI::App* train_diversity =
        app.add_subcommand("train-diversity", "train a set of mutually distinct policies");
    add_common(train_diversity, diversity_opts);

    CommonOpts finetune_opts;
    std::string finetune_in;
    CLI::App* finetune =
        app.add_subcommand("finetune", "continue trained policies on the round outcome reward");
    add_common(finetune, finetune_opts);
    finetune->add_option("--in", finetune_in, "directory written by train-diversity")
        ->required();

    CommonOpts baseline_opts;
    std::string baseline_reward = "damage_dealt";
    CLI::App* baseline =
        app.add_subcommand("train-baseline", "train a fresh policy on a shaped reward");
    add_common(baseline, baseline_opts);
    baseline->add_option("--reward", baseline_reward,
                         "damage_dealt, damage_trade, counter, or outcome");

    CommonOpts eval_opts;
    std::vector<std::string> eval_agents;
    CLI::App* eval_diversity =
        app.add_subcommand("eval-diversity", "pairwise action-disagreement over random states");
    add_common(eval_diversity, eval_opts);
    eval_diversity->add_option("--agent", eval_agents, "name=weights.json (repeat per agent)")
        ->required();

    CommonOpts tournament_opts;
    std::vector<std::string> tournament_agents;
    CLI::App* tournament =
        app.add_subcommand("tournament", "side-balanced round robin between saved policies");
    add_common(tournament, tournament_opts);
    tournament->add_option("--agent", tournament_agents, "name=weights.json (repeat per agent)")
        ->required();

    CommonOpts replay_opts;
    std::string replay_p0;
    std::string replay_p1;
    std::string replay_out;
    CLI::App* replay = app.add_subcommand("replay", "record one greedy round as JSON lines");
    add_common(replay, replay_opts);
    replay->add_option("--p0", replay_p0, "player 0 weights")->required();
    replay->add_option("--p1", replay_p1, "player 1 weights")->required();
    replay->add_option("--replay-out", replay_out, "output .jsonl file")->required();

    std::string dump_moves_out;
    CLI::App* dump_moves =
        app.add_subcommand("dump-moves", "write the built-in move table as JSON");
    dump_moves->add_option("--out", dump_moves_out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train_diversity->parsed()) return run_train_diversity(diversity_opts);
        if (finetune->parsed()) return run_finetune(finetune_opts, finetune_in);
        if (baseline->parsed()) return run_train_baseline(baseline_opts, baseline_reward);
        if (eval_diversity->parsed()) return run_eval_diversity(eval_opts, eval_agents);
        if (tournament->parsed()) return run_tournament_cmd(tournament_opts, tournament_agents);
        if (replay->parsed())
            return run_replay(replay_opts, replay_p0, replay_p1, replay_out);
        if (dump_moves->parsed()) {
            save_roster(builtin_roster(), dump_moves_out);
            std::cout << "wrote " << dump_moves_out << std::endl;
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
