#include "brisket/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace brisket {

QPolicy make_policy(Rng& rng) {
    QPolicy policy;
    policy.net = make_net({kPolicyInputSize, 128, 64, 32, 1},
                          {Activation::Relu, Activation::Relu, Activation::Relu,
                           Activation::Tanh},
                          rng);
    policy.adam = make_adam(policy.net);
    return policy;
}

std::vector<double> policy_input(const Observation& observation, int action) {
    if (action < 0 || action >= kActionCount)
        throw std::invalid_argument("action id out of range");
    std::vector<double> input(static_cast<std::size_t>(kPolicyInputSize), 0.0);
    std::copy(observation.begin(), observation.end(), input.begin());
    input[static_cast<std::size_t>(kObservationSize + action)] = 1.0;
    return input;
}

double q_value(const QPolicy& policy, const Observation& observation, int action) {
    return forward(policy.net, policy_input(observation, action)).front();
}

std::array<double, kActionCount> q_values_all(const QPolicy& policy,
                                              const Observation& observation) {
    std::array<double, kActionCount> values{};
    std::vector<double> input(static_cast<std::size_t>(kPolicyInputSize), 0.0);
    std::copy(observation.begin(), observation.end(), input.begin());
    for (int a = 0; a < kActionCount; ++a) {
        input[static_cast<std::size_t>(kObservationSize + a)] = 1.0;
        values[static_cast<std::size_t>(a)] = forward(policy.net, input).front();
        input[static_cast<std::size_t>(kObservationSize + a)] = 0.0;
    }
    return values;
}

int greedy_action(const QPolicy& policy, const Observation& observation) {
    const auto values = q_values_all(policy, observation);
    int best = 0;
    for (int a = 1; a < kActionCount; ++a) {
        if (values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(best)]) best = a;
    }
    return best;
}

int epsilon_greedy(const QPolicy& policy, const Observation& observation, double epsilon,
                   Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon must be within [0, 1]");
    if (rng.next_double() < epsilon) return rng.next_int(kActionCount);
    return greedy_action(policy, observation);
}

std::string to_string(TargetMode mode) {
    return mode == TargetMode::Bootstrap ? "bootstrap" : "immediate";
}

TargetMode target_mode_from_string(const std::string& text) {
    if (text == "bootstrap") return TargetMode::Bootstrap;
    if (text == "immediate") return TargetMode::Immediate;
    throw std::invalid_argument("unknown target mode: " + text);
}

double make_target(const QPolicy& policy, const TransitionRecord& record, TargetMode mode,
                   double gamma) {
    double target = record.reward;
    if (mode == TargetMode::Bootstrap && !record.terminal) {
        const auto values = q_values_all(policy, record.next_observation);
        target += gamma * *std::max_element(values.begin(), values.end());
    }
    return std::clamp(target, -0.99, 0.99);
}

UpdateStats update_policy(QPolicy& policy, const std::vector<TransitionRecord>& records,
                          TargetMode mode, double gamma, int epochs, double learning_rate,
                          Rng& rng) {
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    UpdateStats stats;
    if (records.empty()) return stats;

    // freeze targets against the pre-update network
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    inputs.reserve(records.size());
    targets.reserve(records.size());
    for (const TransitionRecord& record : records) {
        inputs.push_back(policy_input(record.observation, record.action));
        targets.push_back(make_target(policy, record, mode, gamma));
    }

    std::vector<int> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    double loss_sum = 0.0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (int idx : order) {
            const auto& input = inputs[static_cast<std::size_t>(idx)];
            const std::vector<double> target{targets[static_cast<std::size_t>(idx)]};
            ForwardTrace trace = forward_trace(policy.net, input);
            loss_sum += mse_loss(trace.output(), target);
            Gradients grads = backward(policy.net, trace, mse_loss_grad(trace.output(), target));
            adam_step(policy.net, grads, policy.adam, learning_rate);
            stats.steps += 1;
        }
    }
    stats.mean_loss = loss_sum / static_cast<double>(stats.steps);
    return stats;
}

} // namespace brisket
