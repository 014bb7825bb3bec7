#pragma once
#include <array>
#include <functional>
#include <vector>

#include "brisket/env.hpp"
#include "brisket/policy.hpp"

namespace brisket {

// One entry per decision the player took; events are merged over every frame
// between this decision and the next one (or the end of the round).
struct DecisionRecord {
    Observation observation;
    int action = 0;
    Observation next_observation;
    PlayerEvents events;
    bool terminal = false;
    int outcome = 0;  // +1/-1/0 from this player's perspective, 0 unless terminal
};

struct RoundResult {
    std::array<std::vector<DecisionRecord>, 2> decisions;
    Outcome outcome = Outcome::Ongoing;
    int frames = 0;
};

// Action source. The rng argument is the round's shared stream; player 0
// always draws before player 1 within a frame.
class Agent {
public:
    virtual ~Agent() = default;
    virtual int choose(const Observation& observation, Rng& rng) = 0;
};

class RandomAgent : public Agent {
public:
    int choose(const Observation&, Rng& rng) override { return rng.next_int(kActionCount); }
};

class PolicyAgent : public Agent {
public:
    PolicyAgent(const QPolicy& policy, double epsilon) : policy_(policy), epsilon_(epsilon) {}
    int choose(const Observation& observation, Rng& rng) override {
        return epsilon_greedy(policy_, observation, epsilon_, rng);
    }

private:
    const QPolicy& policy_;
    double epsilon_;
};

class CallbackAgent : public Agent {
public:
    explicit CallbackAgent(std::function<int(const Observation&)> fn) : fn_(std::move(fn)) {}
    int choose(const Observation& observation, Rng&) override { return fn_(observation); }

private:
    std::function<int(const Observation&)> fn_;
};

// Frame callback for replay capture: (frame index, state after the tick,
// actions submitted this tick).
using FrameHook =
    std::function<void(int, const GameState&, const std::array<std::optional<int>, 2>&)>;

RoundResult play_round(const Environment& env, Agent& agent0, Agent& agent1, int round_frames,
                       Rng& rng, bool record0 = true, bool record1 = false,
                       const FrameHook* hook = nullptr);

} // namespace brisket
