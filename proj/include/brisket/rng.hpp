#pragma once
#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace brisket {

// Deterministic xoshiro256** generator. The standard <random> distributions
// are implementation-defined, so every draw here is hand-rolled to keep
// trajectories bit-identical across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53-bit resolution.
    double next_double();

    // Uniform integer in [0, n). Unbiased (rejection sampling). n > 0.
    int next_int(int n);

    // Uniform double in [lo, hi).
    double next_range(double lo, double hi);

    // In-place Fisher-Yates shuffle of an index permutation.
    void shuffle(std::vector<int>& values);

private:
    std::array<std::uint64_t, 4> state_;
};

// Stable seed-derivation: child = mix(parent ^ fnv1a64(label)).
// Labels form a path-like tree, e.g. "diversity/ep3/round7/pilot".
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

std::uint64_t fnv1a64(std::string_view text);

} // namespace brisket
