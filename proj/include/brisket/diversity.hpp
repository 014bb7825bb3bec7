#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "brisket/env.hpp"
#include "brisket/policy.hpp"
#include "brisket/rollout.hpp"

namespace brisket {

// Classifier over the same state-action encoding the policies see; the
// softmax head guesses which policy produced the pair.
struct Discriminator {
    DenseNet net;
    AdamState adam;
};

Discriminator make_discriminator(int policy_count, Rng& rng);

std::vector<double> discriminator_probs(const Discriminator& discriminator,
                                        const Observation& observation, int action);

// Reward for being recognizable: log-likelihood ratio against the uniform
// prior, rescaled by ln(policy_count) and clamped to [-1, 1]. probability
// floor keeps the log finite.
double diversity_reward(const std::vector<double>& probs, int policy_index,
                        double probability_floor);

struct SplitSizes {
    int train = 0;
    int val = 0;
    int test = 0;
};

// 80/10/10, but no split is left empty: train and val keep at least one
// sample each and test takes the remainder. Needs at least 3 samples.
SplitSizes split_sizes(int count);

struct LabeledSample {
    Observation observation;
    int action = 0;
    int label = 0;
};

struct DiscriminatorStats {
    double train_loss = 0.0;
    double val_accuracy = 0.0;
    double test_accuracy = 0.0;
    int train_count = 0;
    int val_count = 0;
    int test_count = 0;
};

// Shuffles, splits, then runs epochs x shuffled single-sample cross-entropy
// steps over the train split. Accuracies are measured after training;
// argmax ties resolve to the lowest class.
DiscriminatorStats update_discriminator(Discriminator& discriminator,
                                        const std::vector<LabeledSample>& samples, int epochs,
                                        double learning_rate, Rng& rng);

struct DiversityConfig {
    int policy_count = 8;
    int episodes = 50;
    int rounds_per_episode = 100;
    int round_frames = 3600;
    double epsilon_start = 0.95;
    double epsilon_end = 0.05;
    int anneal_episodes = 50;
    int epochs = 5;
    double policy_learning_rate = 1e-5;
    double discriminator_learning_rate = 1e-5;
    double gamma = 0.95;
    TargetMode target_mode = TargetMode::Bootstrap;
    double probability_floor = 1e-3;
};

void validate(const DiversityConfig& config);

// Linear from epsilon_start at episode 0 to epsilon_end at anneal_episodes-1,
// flat afterwards.
double anneal_epsilon(const DiversityConfig& config, int episode);

struct EpisodeMetrics {
    int episode = 0;
    double epsilon = 0.0;
    double mean_diversity_reward = 0.0;
    int transition_count = 0;
    std::vector<int> rounds_per_policy;
    std::vector<double> policy_loss;  // mean update loss, 0 for unused policies
    DiscriminatorStats discriminator;
};

struct DiversityResult {
    std::vector<QPolicy> policies;
    Discriminator discriminator;
    std::vector<EpisodeMetrics> metrics;
};

using EpisodeSink = std::function<void(const EpisodeMetrics&, const std::vector<QPolicy>&,
                                       const Discriminator&)>;

// One episode = rounds_per_episode rounds, each played by a uniformly drawn
// pilot policy (epsilon-greedy) against a random opponent. Diversity rewards
// are computed at collection time against the current discriminator; the
// policies update first, then the discriminator on the episode's labeled
// pairs. Every random draw hangs off `seed` through named derivations, so a
// run is a pure function of (env, config, seed); rounds have independent rng
// streams, so `jobs` only changes wall time, never the result.
DiversityResult run_diversity(const Environment& env, const DiversityConfig& config,
                              std::uint64_t seed, const EpisodeSink* sink = nullptr,
                              int jobs = 1);

} // namespace brisket
