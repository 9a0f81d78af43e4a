#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace tb {

std::uint64_t fnv1a64(std::string_view s);

// xoshiro256** with splitmix64 seeding. All transforms (uniform, normal) are
// implemented here rather than via <random> distributions so that identical
// seeds give identical streams on every platform and the full generator state
// is four u64 words, trivially serializable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);

    // Box-Muller. No cached spare, so serialized state fully determines the
    // remaining stream.
    double normal();

    // Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n);

    std::array<std::uint64_t, 4> state() const { return s_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { s_ = s; }

  private:
    std::array<std::uint64_t, 4> s_{};
};

// Stateless stream derivation: a child generator keyed on (seed, purpose, a, b).
// Used so batch workers, generation indices, and per-step draws never share a
// sequential stream and resume from any step reproduces the same draws.
Rng derive_rng(std::uint64_t seed, std::string_view purpose, std::uint64_t a = 0,
               std::uint64_t b = 0);

}  // namespace tb
