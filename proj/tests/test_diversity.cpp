#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "brisket/diversity.hpp"

using namespace brisket;

namespace {

Environment make_test_env() {
    return Environment(EnvConfig{}, builtin_roster());
}

DiversityConfig tiny_config() {
    DiversityConfig config;
    config.policy_count = 2;
    config.episodes = 2;
    config.rounds_per_episode = 3;
    config.round_frames = 80;
    config.anneal_episodes = 2;
    config.epochs = 1;
    config.policy_learning_rate = 1e-5;
    config.discriminator_learning_rate = 1e-5;
    return config;
}

} // namespace

TEST_SUITE("diversity") {
    TEST_CASE("discriminator head width follows the policy count") {
        Rng rng(1);
        const Discriminator d = make_discriminator(3, rng);
        CHECK(d.net.dims == std::vector<int>{199, 128, 64, 32, 3});
        CHECK(d.net.activations.back() == Activation::Softmax);

        const Observation obs{};
        const std::vector<double> probs = discriminator_probs(d, obs, 5);
        REQUIRE(probs.size() == 3);
        double sum = 0.0;
        for (const double p : probs) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0));

        Rng rng2(1);
        CHECK_THROWS_AS(make_discriminator(1, rng2), std::invalid_argument);
    }

    TEST_CASE("diversity reward matches the log-ratio formula") {
        const double floor = 1e-3;

        SUBCASE("uniform guess earns exactly zero") {
            const std::vector<double> probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
            CHECK(diversity_reward(probs, 0, floor) == doctest::Approx(0.0).epsilon(1e-12));
        }
        SUBCASE("full confidence earns exactly one") {
            // ln(1) - ln(1/3) over ln(3) = 1
            const std::vector<double> probs{0.0, 1.0, 0.0};
            CHECK(diversity_reward(probs, 1, floor) == doctest::Approx(1.0));
        }
        SUBCASE("p=0.05 with three policies clamps at the negative bound") {
            // (ln 0.05 + ln 3) / ln 3 = -1.7268... before the clamp
            const std::vector<double> probs{0.05, 0.475, 0.475};
            CHECK(diversity_reward(probs, 0, floor) == -1.0);
        }
        SUBCASE("mid-range value sits where the formula puts it") {
            const std::vector<double> probs{0.6, 0.2, 0.2};
            const double want = (std::log(0.6) + std::log(3.0)) / std::log(3.0);
            CHECK(diversity_reward(probs, 0, floor) == doctest::Approx(want));
            CHECK(want > 0.0);
            CHECK(want < 1.0);
        }
        SUBCASE("probability floor keeps zero probabilities finite") {
            const std::vector<double> probs{0.0, 0.5, 0.5};
            const double r = diversity_reward(probs, 0, floor);
            CHECK(std::isfinite(r));
            CHECK(r == -1.0);
        }
        SUBCASE("two-policy scale uses ln 2") {
            const std::vector<double> probs{0.8, 0.2};
            const double want = (std::log(0.8) + std::log(2.0)) / std::log(2.0);
            CHECK(diversity_reward(probs, 0, floor) == doctest::Approx(want));
        }
    }

    TEST_CASE("split sizes are 80/10/10 with small-batch floors") {
        SUBCASE("round numbers") {
            const SplitSizes s = split_sizes(100);
            CHECK(s.train == 80);
            CHECK(s.val == 10);
            CHECK(s.test == 10);
        }
        SUBCASE("remainder goes to test") {
            const SplitSizes s = split_sizes(57);
            CHECK(s.train == 45);  // 57*8/10
            CHECK(s.val == 5);
            CHECK(s.test == 7);
            CHECK(s.train + s.val + s.test == 57);
        }
        SUBCASE("small counts still leave everything non-empty") {
            for (int n = 3; n <= 12; ++n) {
                const SplitSizes s = split_sizes(n);
                CHECK(s.train >= 1);
                CHECK(s.val >= 1);
                CHECK(s.test >= 1);
                CHECK(s.train + s.val + s.test == n);
            }
        }
        SUBCASE("counts below three are rejected") {
            CHECK_THROWS_AS(split_sizes(2), std::invalid_argument);
        }
    }

    TEST_CASE("epsilon anneals linearly then holds") {
        DiversityConfig config;
        config.epsilon_start = 0.95;
        config.epsilon_end = 0.05;
        config.anneal_episodes = 10;

        CHECK(anneal_epsilon(config, 0) == doctest::Approx(0.95));
        CHECK(anneal_epsilon(config, 9) == doctest::Approx(0.05));
        CHECK(anneal_epsilon(config, 50) == doctest::Approx(0.05));
        // halfway through the schedule sits halfway down the line
        const double mid = anneal_epsilon(config, 4) + anneal_epsilon(config, 5);
        CHECK(mid / 2.0 == doctest::Approx(0.5));

        config.anneal_episodes = 1;
        CHECK(anneal_epsilon(config, 0) == doctest::Approx(0.05));
    }

    TEST_CASE("discriminator learns an easily separable toy problem") {
        Rng rng(33);
        Discriminator d = make_discriminator(2, rng);

        // class 0 lives at observation[0] = 1 with action 3; class 1 at
        // observation[1] = 1 with action 40 - trivially separable
        std::vector<LabeledSample> samples;
        for (int i = 0; i < 60; ++i) {
            LabeledSample s;
            s.label = i % 2;
            s.observation = Observation{};
            if (s.label == 0) {
                s.observation[0] = 1.0;
                s.action = 3;
            } else {
                s.observation[1] = 1.0;
                s.action = 40;
            }
            samples.push_back(s);
        }

        Rng update_rng(44);
        DiscriminatorStats last{};
        for (int round = 0; round < 30; ++round)
            last = update_discriminator(d, samples, 5, 1e-3, update_rng);

        CHECK(last.val_accuracy == 1.0);
        CHECK(last.test_accuracy == 1.0);
        CHECK(last.train_loss < 0.2);
        CHECK(last.train_count == 48);
        CHECK(last.val_count == 6);
        CHECK(last.test_count == 6);

        // the learned classifier feeds the reward in the right direction
        const std::vector<double> p0 = discriminator_probs(d, samples[0].observation, 3);
        CHECK(p0[0] > 0.9);
        CHECK(diversity_reward(p0, 0, 1e-3) > 0.5);
        CHECK(diversity_reward(p0, 1, 1e-3) == -1.0);
    }

    TEST_CASE("update_discriminator validates its inputs") {
        Rng rng(1);
        Discriminator d = make_discriminator(2, rng);
        std::vector<LabeledSample> samples(10);
        samples[3].label = 2;  // out of range for a 2-way head
        Rng update_rng(2);
        CHECK_THROWS_AS(update_discriminator(d, samples, 5, 1e-3, update_rng),
                        std::invalid_argument);
    }

    TEST_CASE("config validation rejects broken setups") {
        validate(tiny_config());

        DiversityConfig bad = tiny_config();
        bad.policy_count = 1;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);

        bad = tiny_config();
        bad.epsilon_start = 1.5;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);

        bad = tiny_config();
        bad.anneal_episodes = 0;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);

        bad = tiny_config();
        bad.gamma = 1.5;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);

        bad = tiny_config();
        bad.probability_floor = 0.0;
        CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    }

    TEST_CASE("a tiny run is reproducible bit for bit") {
        const Environment env = make_test_env();
        const DiversityConfig config = tiny_config();

        const DiversityResult a = run_diversity(env, config, 777);
        const DiversityResult b = run_diversity(env, config, 777);

        REQUIRE(a.policies.size() == 2);
        REQUIRE(b.policies.size() == 2);
        for (std::size_t k = 0; k < a.policies.size(); ++k) {
            CHECK(a.policies[k].net.weights == b.policies[k].net.weights);
            CHECK(a.policies[k].net.biases == b.policies[k].net.biases);
        }
        CHECK(a.discriminator.net.weights == b.discriminator.net.weights);

        REQUIRE(a.metrics.size() == 2);
        for (std::size_t e = 0; e < a.metrics.size(); ++e) {
            CHECK(a.metrics[e].mean_diversity_reward == b.metrics[e].mean_diversity_reward);
            CHECK(a.metrics[e].transition_count == b.metrics[e].transition_count);
            CHECK(a.metrics[e].rounds_per_policy == b.metrics[e].rounds_per_policy);
        }

        const DiversityResult c = run_diversity(env, config, 778);
        CHECK(a.policies[0].net.weights != c.policies[0].net.weights);
    }

    TEST_CASE("worker count changes wall time only") {
        const Environment env = make_test_env();
        DiversityConfig config = tiny_config();
        config.rounds_per_episode = 5;

        const DiversityResult serial = run_diversity(env, config, 555, nullptr, 1);
        const DiversityResult threaded = run_diversity(env, config, 555, nullptr, 4);

        for (std::size_t k = 0; k < serial.policies.size(); ++k)
            CHECK(serial.policies[k].net.weights == threaded.policies[k].net.weights);
        CHECK(serial.discriminator.net.weights == threaded.discriminator.net.weights);
        REQUIRE(serial.metrics.size() == threaded.metrics.size());
        for (std::size_t e = 0; e < serial.metrics.size(); ++e) {
            CHECK(serial.metrics[e].mean_diversity_reward ==
                  threaded.metrics[e].mean_diversity_reward);
            CHECK(serial.metrics[e].rounds_per_policy == threaded.metrics[e].rounds_per_policy);
        }
    }

    TEST_CASE("episode metrics reflect the configured workload") {
        const Environment env = make_test_env();
        const DiversityConfig config = tiny_config();

        int sink_calls = 0;
        const EpisodeSink sink = [&](const EpisodeMetrics& metrics,
                                     const std::vector<QPolicy>& policies,
                                     const Discriminator&) {
            CHECK(metrics.episode == sink_calls);
            CHECK(policies.size() == 2);
            sink_calls += 1;
        };
        const DiversityResult result = run_diversity(env, config, 999, &sink);

        CHECK(sink_calls == 2);
        REQUIRE(result.metrics.size() == 2);
        for (const EpisodeMetrics& m : result.metrics) {
            int rounds = 0;
            REQUIRE(m.rounds_per_policy.size() == 2);
            for (const int r : m.rounds_per_policy) rounds += r;
            CHECK(rounds == 3);
            CHECK(m.transition_count > 0);
            CHECK(m.policy_loss.size() == 2);
            CHECK(m.discriminator.train_count > 0);
            CHECK(m.mean_diversity_reward >= -1.0);
            CHECK(m.mean_diversity_reward <= 1.0);
        }
        CHECK(result.metrics[0].epsilon == doctest::Approx(0.95));
        CHECK(result.metrics[1].epsilon == doctest::Approx(0.05));

        // policies actually moved away from their initialization
        Rng fresh_rng(999);
        (void)fresh_rng;
        CHECK(result.policies[0].adam.step > 0);
        CHECK(result.discriminator.adam.step > 0);
    }
}
