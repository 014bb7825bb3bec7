#pragma once
#include <array>
#include <vector>

#include "brisket/env.hpp"
#include "brisket/net.hpp"

namespace brisket {

inline constexpr int kPolicyInputSize = kObservationSize + kActionCount;  // 199

// State-action value network: the action rides into the input as a one-hot
// block, the single tanh output is the value estimate in [-1, 1].
struct QPolicy {
    DenseNet net;
    AdamState adam;
};

QPolicy make_policy(Rng& rng);

std::vector<double> policy_input(const Observation& observation, int action);

double q_value(const QPolicy& policy, const Observation& observation, int action);
std::array<double, kActionCount> q_values_all(const QPolicy& policy,
                                              const Observation& observation);

// Ties break toward the lowest action id so evaluation is reproducible.
int greedy_action(const QPolicy& policy, const Observation& observation);

// Draws one uniform sample always (and a second for the random action when
// exploring), so the rng stream advances the same way regardless of epsilon.
int epsilon_greedy(const QPolicy& policy, const Observation& observation, double epsilon,
                   Rng& rng);

enum class TargetMode { Bootstrap, Immediate };

std::string to_string(TargetMode mode);
TargetMode target_mode_from_string(const std::string& text);

struct TransitionRecord {
    Observation observation;
    int action = 0;
    double reward = 0.0;  // already scaled to roughly [-1, 1]
    Observation next_observation;
    bool terminal = false;
};

// Bootstrap: clamp(r + gamma * max_a Q(s', a), +-0.99); the lookahead term is
// dropped on terminal transitions. Immediate: clamp(r, +-0.99). Targets stay
// inside the tanh range so they are reachable.
double make_target(const QPolicy& policy, const TransitionRecord& record, TargetMode mode,
                   double gamma);

struct UpdateStats {
    double mean_loss = 0.0;
    int steps = 0;
};

// Computes all targets against the incoming network, then runs
// epochs x shuffled single-sample updates. Adam state lives in the policy and
// persists across calls.
UpdateStats update_policy(QPolicy& policy, const std::vector<TransitionRecord>& records,
                          TargetMode mode, double gamma, int epochs, double learning_rate,
                          Rng& rng);

} // namespace brisket
