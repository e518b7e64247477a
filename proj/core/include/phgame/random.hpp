#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace phgame {

/// Seeded generator whose output sequence is identical on every platform:
/// the raw engine is standardized, and the real/index mappings below are
/// done by hand rather than through the unspecified std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

}  // namespace phgame
