#include "brisket/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "brisket/util.hpp"

namespace brisket {

Discriminator make_discriminator(int policy_count, Rng& rng) {
    if (policy_count < 2) throw std::invalid_argument("discriminator needs at least 2 classes");
    Discriminator d;
    d.net = make_net({kPolicyInputSize, 128, 64, 32, policy_count},
                     {Activation::Relu, Activation::Relu, Activation::Relu,
                      Activation::Softmax},
                     rng);
    d.adam = make_adam(d.net);
    return d;
}

std::vector<double> discriminator_probs(const Discriminator& discriminator,
                                        const Observation& observation, int action) {
    return forward(discriminator.net, policy_input(observation, action));
}

double diversity_reward(const std::vector<double>& probs, int policy_index,
                        double probability_floor) {
    if (policy_index < 0 || static_cast<std::size_t>(policy_index) >= probs.size())
        throw std::invalid_argument("policy index out of range");
    const double k = static_cast<double>(probs.size());
    const double p = std::max(probs[static_cast<std::size_t>(policy_index)], probability_floor);
    const double raw = std::log(p) + std::log(k);  // ln p - ln(1/k)
    return std::clamp(raw / std::log(k), -1.0, 1.0);
}

SplitSizes split_sizes(int count) {
    if (count < 3)
        throw std::invalid_argument("need at least 3 samples for a train/val/test split");
    SplitSizes s;
    s.train = std::clamp(count * 8 / 10, 1, count - 2);
    s.val = std::clamp(count / 10, 1, count - 1 - s.train);
    s.test = count - s.train - s.val;
    return s;
}

namespace {

int argmax_class(const std::vector<double>& probs) {
    int best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

} // namespace

DiscriminatorStats update_discriminator(Discriminator& discriminator,
                                        const std::vector<LabeledSample>& samples, int epochs,
                                        double learning_rate, Rng& rng) {
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    for (const LabeledSample& s : samples) {
        if (s.label < 0 || s.label >= discriminator.net.output_size())
            throw std::invalid_argument("sample label out of range");
    }
    DiscriminatorStats stats;
    if (samples.size() < 3) return stats;  // nothing splittable; counts stay zero

    std::vector<int> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);

    const SplitSizes split = split_sizes(static_cast<int>(samples.size()));
    stats.train_count = split.train;
    stats.val_count = split.val;
    stats.test_count = split.test;

    std::vector<int> train(order.begin(), order.begin() + split.train);
    std::vector<int> val(order.begin() + split.train, order.begin() + split.train + split.val);
    std::vector<int> test(order.begin() + split.train + split.val, order.end());

    double loss_sum = 0.0;
    int steps = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(train);
        for (int idx : train) {
            const LabeledSample& s = samples[static_cast<std::size_t>(idx)];
            const std::vector<double> input = policy_input(s.observation, s.action);
            ForwardTrace trace = forward_trace(discriminator.net, input);
            loss_sum += cross_entropy_loss(trace.output(), s.label);
            Gradients grads =
                backward(discriminator.net, trace, cross_entropy_grad(trace.output(), s.label));
            adam_step(discriminator.net, grads, discriminator.adam, learning_rate);
            steps += 1;
        }
    }
    stats.train_loss = steps > 0 ? loss_sum / steps : 0.0;

    const auto accuracy = [&](const std::vector<int>& indices) {
        if (indices.empty()) return 0.0;
        int correct = 0;
        for (int idx : indices) {
            const LabeledSample& s = samples[static_cast<std::size_t>(idx)];
            const auto probs = discriminator_probs(discriminator, s.observation, s.action);
            if (argmax_class(probs) == s.label) correct += 1;
        }
        return static_cast<double>(correct) / static_cast<double>(indices.size());
    };
    stats.val_accuracy = accuracy(val);
    stats.test_accuracy = accuracy(test);
    return stats;
}

void validate(const DiversityConfig& config) {
    if (config.policy_count < 2) throw std::invalid_argument("policy_count must be at least 2");
    if (config.episodes <= 0) throw std::invalid_argument("episodes must be positive");
    if (config.rounds_per_episode <= 0)
        throw std::invalid_argument("rounds_per_episode must be positive");
    if (config.round_frames <= 0) throw std::invalid_argument("round_frames must be positive");
    if (config.epsilon_start < 0.0 || config.epsilon_start > 1.0 || config.epsilon_end < 0.0 ||
        config.epsilon_end > 1.0)
        throw std::invalid_argument("epsilon must stay in [0, 1]");
    if (config.anneal_episodes <= 0)
        throw std::invalid_argument("anneal_episodes must be positive");
    if (config.epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (config.policy_learning_rate <= 0.0 || config.discriminator_learning_rate <= 0.0)
        throw std::invalid_argument("learning rates must be positive");
    if (config.gamma < 0.0 || config.gamma >= 1.0)
        throw std::invalid_argument("gamma must be in [0, 1)");
    if (config.probability_floor <= 0.0 || config.probability_floor >= 1.0)
        throw std::invalid_argument("probability_floor must be in (0, 1)");
}

double anneal_epsilon(const DiversityConfig& config, int episode) {
    if (episode < 0) throw std::invalid_argument("episode must be non-negative");
    if (config.anneal_episodes <= 1) return config.epsilon_end;
    const int last = config.anneal_episodes - 1;
    if (episode >= last) return config.epsilon_end;
    const double t = static_cast<double>(episode) / static_cast<double>(last);
    return config.epsilon_start + t * (config.epsilon_end - config.epsilon_start);
}

DiversityResult run_diversity(const Environment& env, const DiversityConfig& config,
                              std::uint64_t seed, const EpisodeSink* sink, int jobs) {
    validate(config);
    const std::uint64_t stage_seed = derive_seed(seed, "diversity");
    const int k = config.policy_count;

    DiversityResult result;
    result.policies.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        Rng init_rng(derive_seed(stage_seed, "policy" + std::to_string(i) + "/init"));
        result.policies.push_back(make_policy(init_rng));
    }
    {
        Rng init_rng(derive_seed(stage_seed, "discriminator/init"));
        result.discriminator = make_discriminator(k, init_rng);
    }

    for (int episode = 0; episode < config.episodes; ++episode) {
        const double epsilon = anneal_epsilon(config, episode);
        const std::uint64_t episode_seed =
            derive_seed(stage_seed, "ep" + std::to_string(episode));

        std::vector<std::vector<TransitionRecord>> transitions(static_cast<std::size_t>(k));
        std::vector<LabeledSample> labeled;
        EpisodeMetrics metrics;
        metrics.episode = episode;
        metrics.epsilon = epsilon;
        metrics.rounds_per_policy.assign(static_cast<std::size_t>(k), 0);
        metrics.policy_loss.assign(static_cast<std::size_t>(k), 0.0);

        // rounds are rng-independent, so they can run on worker threads; the
        // per-round buffers are merged in round order to keep the result
        // identical to a serial run
        struct RoundData {
            int pilot = 0;
            std::vector<TransitionRecord> transitions;
            double reward_sum = 0.0;
        };
        std::vector<RoundData> rounds(static_cast<std::size_t>(config.rounds_per_episode));
        parallel_for(config.rounds_per_episode, jobs, [&](int round) {
            Rng round_rng(derive_seed(episode_seed, "round" + std::to_string(round)));
            RoundData& data = rounds[static_cast<std::size_t>(round)];
            data.pilot = round_rng.next_int(k);

            PolicyAgent pilot_agent(result.policies[static_cast<std::size_t>(data.pilot)],
                                    epsilon);
            RandomAgent opponent;
            const RoundResult round_result =
                play_round(env, pilot_agent, opponent, config.round_frames, round_rng, true,
                           false);

            for (const DecisionRecord& d : round_result.decisions[0]) {
                const auto probs =
                    discriminator_probs(result.discriminator, d.observation, d.action);
                const double reward =
                    diversity_reward(probs, data.pilot, config.probability_floor);
                data.reward_sum += reward;

                TransitionRecord t;
                t.observation = d.observation;
                t.action = d.action;
                t.reward = reward;
                t.next_observation = d.next_observation;
                t.terminal = d.terminal;
                data.transitions.push_back(std::move(t));
            }
        });

        double reward_sum = 0.0;
        for (const RoundData& data : rounds) {
            metrics.rounds_per_policy[static_cast<std::size_t>(data.pilot)] += 1;
            reward_sum += data.reward_sum;
            for (const TransitionRecord& t : data.transitions) {
                labeled.push_back(LabeledSample{t.observation, t.action, data.pilot});
                transitions[static_cast<std::size_t>(data.pilot)].push_back(t);
            }
        }
        metrics.transition_count = static_cast<int>(labeled.size());
        metrics.mean_diversity_reward =
            labeled.empty() ? 0.0 : reward_sum / static_cast<double>(labeled.size());

        // policies learn from the old discriminator, then it catches up
        for (int i = 0; i < k; ++i) {
            if (transitions[static_cast<std::size_t>(i)].empty()) continue;
            Rng update_rng(
                derive_seed(episode_seed, "update/policy" + std::to_string(i)));
            const UpdateStats stats = update_policy(
                result.policies[static_cast<std::size_t>(i)],
                transitions[static_cast<std::size_t>(i)], config.target_mode, config.gamma,
                config.epochs, config.policy_learning_rate, update_rng);
            metrics.policy_loss[static_cast<std::size_t>(i)] = stats.mean_loss;
        }
        {
            Rng update_rng(derive_seed(episode_seed, "update/discriminator"));
            metrics.discriminator =
                update_discriminator(result.discriminator, labeled, config.epochs,
                                     config.discriminator_learning_rate, update_rng);
        }

        result.metrics.push_back(metrics);
        if (sink) (*sink)(metrics, result.policies, result.discriminator);
    }
    return result;
}

} // namespace brisket
