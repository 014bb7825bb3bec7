#include "brisket/rollout.hpp"

namespace brisket {

RoundResult play_round(const Environment& env, Agent& agent0, Agent& agent1, int round_frames,
                       Rng& rng, bool record0, bool record1, const FrameHook* hook) {
    RoundResult result;
    GameState state = env.reset(round_frames);

    struct Pending {
        bool open = false;
        Observation observation;
        int action = 0;
        PlayerEvents events;
    };
    std::array<Pending, 2> pending;
    const std::array<Agent*, 2> agents{&agent0, &agent1};
    const std::array<bool, 2> record{record0, record1};

    int frame = 0;
    while (state.outcome == Outcome::Ongoing) {
        std::array<std::optional<int>, 2> actions;
        for (int i = 0; i < 2; ++i) {
            if (!env.is_actionable(state, i)) continue;
            const Observation observation = env.encode(state, i);
            Pending& p = pending[static_cast<std::size_t>(i)];
            if (p.open && record[static_cast<std::size_t>(i)]) {
                DecisionRecord rec;
                rec.observation = p.observation;
                rec.action = p.action;
                rec.next_observation = observation;
                rec.events = p.events;
                rec.terminal = false;
                rec.outcome = 0;
                result.decisions[static_cast<std::size_t>(i)].push_back(std::move(rec));
            }
            const int action = agents[static_cast<std::size_t>(i)]->choose(observation, rng);
            p.open = true;
            p.observation = observation;
            p.action = action;
            p.events = PlayerEvents{};
            actions[static_cast<std::size_t>(i)] = action;
        }

        env.tick(state, actions[0], actions[1]);
        for (int i = 0; i < 2; ++i)
            pending[static_cast<std::size_t>(i)].events.merge(
                state.events[static_cast<std::size_t>(i)]);
        if (hook) (*hook)(frame, state, actions);
        frame += 1;
    }

    for (int i = 0; i < 2; ++i) {
        Pending& p = pending[static_cast<std::size_t>(i)];
        if (!p.open || !record[static_cast<std::size_t>(i)]) continue;
        DecisionRecord rec;
        rec.observation = p.observation;
        rec.action = p.action;
        rec.next_observation = env.encode(state, i);
        rec.events = p.events;
        rec.terminal = true;
        rec.outcome = Environment::outcome_sign(state, i);
        result.decisions[static_cast<std::size_t>(i)].push_back(std::move(rec));
    }

    result.outcome = state.outcome;
    result.frames = frame;
    return result;
}

} // namespace brisket
