#pragma once

#include <cstdint>
#include <random>

namespace aoa {

/// Seedable, splittable pseudo-random stream.
///
/// A stream is identified by its derivation seed. split(key) derives a child
/// stream from that seed and the key only, so children do not depend on how
/// many values the parent has already produced.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    RandomStream split(std::uint64_t key) const;

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    double standard_normal();

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace aoa
