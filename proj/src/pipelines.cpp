#include "brisket/pipelines.hpp"

#include <stdexcept>

#include "brisket/util.hpp"

namespace brisket {
namespace {

struct RoundOutcome {
    std::vector<TransitionRecord> transitions;
    double total_reward = 0.0;
    int sign = 0;
};

RoundOutcome shaped_round(const Environment& env, const QPolicy& policy, RewardKind reward,
                          double epsilon, int round_frames, Rng& rng) {
    PolicyAgent agent(policy, epsilon);
    RandomAgent opponent;
    const RoundResult round = play_round(env, agent, opponent, round_frames, rng, true, false);

    RoundOutcome out;
    out.transitions.reserve(round.decisions[0].size());
    for (const DecisionRecord& d : round.decisions[0]) {
        const double raw = shaped_reward(reward, d.outcome, d.events);
        out.total_reward += raw;

        TransitionRecord t;
        t.observation = d.observation;
        t.action = d.action;
        t.reward = normalize_reward(raw);
        t.next_observation = d.next_observation;
        t.terminal = d.terminal;
        out.transitions.push_back(std::move(t));

        if (d.terminal) out.sign = d.outcome;
    }
    return out;
}

} // namespace

void validate(const RewardStageConfig& config) {
    if (config.episodes <= 0) throw std::invalid_argument("episodes must be positive");
    if (config.rounds_per_episode <= 0)
        throw std::invalid_argument("rounds_per_episode must be positive");
    if (config.round_frames <= 0) throw std::invalid_argument("round_frames must be positive");
    if (config.epsilon < 0.0 || config.epsilon > 1.0)
        throw std::invalid_argument("epsilon must stay in [0, 1]");
    if (config.epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (config.gamma < 0.0 || config.gamma >= 1.0)
        throw std::invalid_argument("gamma must be in [0, 1)");
    if (config.eval_rounds <= 0) throw std::invalid_argument("eval_rounds must be positive");
}

EvalStats evaluate_greedy(const Environment& env, const QPolicy& policy, RewardKind reward,
                          int rounds, int round_frames, std::uint64_t seed) {
    if (rounds <= 0) throw std::invalid_argument("rounds must be positive");
    EvalStats stats;
    double reward_sum = 0.0;
    for (int r = 0; r < rounds; ++r) {
        Rng rng(derive_seed(seed, "round" + std::to_string(r)));
        const RoundOutcome out = shaped_round(env, policy, reward, 0.0, round_frames, rng);
        reward_sum += out.total_reward;
        if (out.sign > 0) stats.wins += 1;
        else if (out.sign < 0) stats.losses += 1;
        else stats.ties += 1;
    }
    stats.mean_reward = reward_sum / static_cast<double>(rounds);
    return stats;
}

StageResult run_reward_stage(const Environment& env, QPolicy policy,
                             const RewardStageConfig& config, std::uint64_t seed,
                             const std::string& label, const StageSink* sink, int jobs) {
    validate(config);
    const std::uint64_t stage_seed = derive_seed(seed, label);

    StageResult result;
    result.policy = policy;

    for (int episode = 0; episode < config.episodes; ++episode) {
        const std::uint64_t episode_seed =
            derive_seed(stage_seed, "ep" + std::to_string(episode));

        StageEpisode metrics;
        metrics.episode = episode;

        std::vector<RoundOutcome> rounds(static_cast<std::size_t>(config.rounds_per_episode));
        parallel_for(config.rounds_per_episode, jobs, [&](int round) {
            Rng round_rng(derive_seed(episode_seed, "round" + std::to_string(round)));
            rounds[static_cast<std::size_t>(round)] = shaped_round(
                env, policy, config.reward, config.epsilon, config.round_frames, round_rng);
        });

        std::vector<TransitionRecord> transitions;
        double reward_sum = 0.0;
        for (RoundOutcome& out : rounds) {
            reward_sum += out.total_reward;
            if (out.sign > 0) metrics.wins += 1;
            else if (out.sign < 0) metrics.losses += 1;
            else metrics.ties += 1;
            for (TransitionRecord& t : out.transitions) transitions.push_back(std::move(t));
        }
        metrics.mean_reward = reward_sum / static_cast<double>(config.rounds_per_episode);

        Rng update_rng(derive_seed(episode_seed, "update"));
        const UpdateStats update = update_policy(policy, transitions, config.target_mode,
                                                 config.gamma, config.epochs,
                                                 config.learning_rate, update_rng);
        metrics.mean_loss = update.mean_loss;

        metrics.eval = evaluate_greedy(env, policy, config.reward, config.eval_rounds,
                                       config.round_frames, derive_seed(episode_seed, "eval"));

        result.episodes.push_back(metrics);
        if (sink) (*sink)(metrics, policy);

        // select_best prefers earlier episodes on exact ties, so this fires
        // only when the fresh episode strictly improves
        if (select_best(result.episodes) == episode) {
            result.policy = policy;
            result.best_episode = episode;
        }
    }
    return result;
}

StageResult finetune_policy(const Environment& env, const QPolicy& start,
                            const RewardStageConfig& config, std::uint64_t seed, int policy_id,
                            const StageSink* sink, int jobs) {
    RewardStageConfig cfg = config;
    cfg.reward = RewardKind::Outcome;
    return run_reward_stage(env, start, cfg, seed,
                            "finetune/policy" + std::to_string(policy_id), sink, jobs);
}

StageResult train_baseline(const Environment& env, const RewardStageConfig& config,
                           std::uint64_t seed, const StageSink* sink, int jobs) {
    const std::string label = "baseline/" + to_string(config.reward);
    Rng init_rng(derive_seed(derive_seed(seed, label), "init"));
    QPolicy policy = make_policy(init_rng);
    return run_reward_stage(env, std::move(policy), config, seed, label, sink, jobs);
}

int select_best(const std::vector<StageEpisode>& episodes) {
    if (episodes.empty()) throw std::invalid_argument("no episodes to select from");
    int best = 0;
    for (int i = 1; i < static_cast<int>(episodes.size()); ++i) {
        const StageEpisode& cand = episodes[static_cast<std::size_t>(i)];
        const StageEpisode& cur = episodes[static_cast<std::size_t>(best)];
        if (cand.eval.wins > cur.eval.wins ||
            (cand.eval.wins == cur.eval.wins &&
             cand.eval.mean_reward > cur.eval.mean_reward)) {
            best = i;
        }
    }
    return best;
}

} // namespace brisket
