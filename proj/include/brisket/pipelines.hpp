#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "brisket/env.hpp"
#include "brisket/policy.hpp"
#include "brisket/rewards.hpp"
#include "brisket/rollout.hpp"

namespace brisket {

// Configuration shared by the fine-tuning stage (which continues a diversity
// policy with the outcome reward) and baseline training (which starts fresh
// with a shaped reward).
struct RewardStageConfig {
    RewardKind reward = RewardKind::Outcome;
    int episodes = 20;
    int rounds_per_episode = 50;
    int round_frames = 3600;
    double epsilon = 0.05;
    int epochs = 5;
    double learning_rate = 1e-6;
    double gamma = 0.95;
    TargetMode target_mode = TargetMode::Bootstrap;
    int eval_rounds = 9;
};

void validate(const RewardStageConfig& config);

struct EvalStats {
    double mean_reward = 0.0;  // mean per-round sum of shaped step rewards
    int wins = 0;
    int losses = 0;
    int ties = 0;
};

// Greedy policy as player 0 against a random opponent; per-round rng streams
// derive from `seed`.
EvalStats evaluate_greedy(const Environment& env, const QPolicy& policy, RewardKind reward,
                          int rounds, int round_frames, std::uint64_t seed);

struct StageEpisode {
    int episode = 0;
    double mean_loss = 0.0;
    double mean_reward = 0.0;  // training rounds, raw shaped scale
    int wins = 0;
    int losses = 0;
    int ties = 0;
    EvalStats eval;
};

struct StageResult {
    QPolicy policy;  // snapshot from the best evaluation episode
    std::vector<StageEpisode> episodes;
    int best_episode = 0;
};

using StageSink = std::function<void(const StageEpisode&, const QPolicy&)>;

// Per episode: collect rounds_per_episode epsilon-greedy rounds vs the random
// opponent, update on the shaped rewards (scaled to the value-net range),
// then evaluate greedily. The returned policy is the snapshot with the most
// evaluation wins (ties: higher eval mean reward, then the earlier episode).
// `label` namespaces the rng streams under `seed`; `jobs` only parallelizes
// the independent collection rounds, never changing the result.
StageResult run_reward_stage(const Environment& env, QPolicy policy,
                             const RewardStageConfig& config, std::uint64_t seed,
                             const std::string& label, const StageSink* sink = nullptr,
                             int jobs = 1);

// Continues an existing policy with the outcome reward.
StageResult finetune_policy(const Environment& env, const QPolicy& start,
                            const RewardStageConfig& config, std::uint64_t seed, int policy_id,
                            const StageSink* sink = nullptr, int jobs = 1);

// Fresh policy trained directly on a shaped reward.
StageResult train_baseline(const Environment& env, const RewardStageConfig& config,
                           std::uint64_t seed, const StageSink* sink = nullptr, int jobs = 1);

// Index of the episode with the most eval wins; ties prefer higher eval mean
// reward, then the earlier episode.
int select_best(const std::vector<StageEpisode>& episodes);

} // namespace brisket
