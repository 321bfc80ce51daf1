#pragma once

#include <cstdint>
#include <random>

namespace condmode {

/// Explicit seed for every randomized operation. There is no global RNG
/// state anywhere in the library.
struct Seed {
    std::uint64_t value = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

// splitmix64 finalizer; decorrelates consecutive integers.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives an independent sub-seed for work item `index` (per-query seeds in
/// batch predictions, per-run seeds in repeated experiments).
inline Seed derive_seed(Seed base, std::uint64_t index) {
    return Seed{mix64(base.value ^ mix64(index + 1))};
}

/// Deterministic random source: a mersenne-twister engine (the 64-bit
/// sequence is fixed by the standard) with explicit uniform and normal
/// transforms so the produced deviates do not depend on library-specific
/// distribution implementations.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed.value) {}

    /// Uniform deviate in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal deviate (Box-Muller, pair cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace condmode
