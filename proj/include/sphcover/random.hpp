#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <limits>

namespace sphcover {

/// SplitMix64 step (Steele, Lea, Flood 2014). Used to expand a single
/// 64-bit seed into generator state and to derive per-task seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for sub-task `index` of a run seeded with `seed`. Stable across
/// platforms and independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256** 1.0 (Blackman & Vigna). State is filled from four
/// consecutive splitmix64 outputs of the user seed, so every seed
/// (including 0) yields a valid non-zero state.
///
/// Satisfies UniformRandomBitGenerator, but the library never routes it
/// through <random> distributions: their output is implementation
/// defined. Use uniform() / gaussian() below for reproducible streams.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform();

    /// Standard normal via the Box-Muller transform; the second variate
    /// of each pair is cached.
    double gaussian();

    Eigen::VectorXd gaussian_vector(Eigen::Index n);

    /// Uniform point on the unit sphere in R^n (normalized Gaussian).
    Eigen::VectorXd sphere_point(Eigen::Index n);

private:
    std::array<std::uint64_t, 4> s_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sphcover
