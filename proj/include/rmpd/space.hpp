#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include <boost/random/normal_distribution.hpp>

namespace rmpd {

/// A point in an n-dimensional Euclidean configuration space.
///
/// Coordinates are always finite; construction from non-finite values throws
/// std::invalid_argument.
class State {
public:
    State() = default;
    explicit State(std::size_t dim, double fill = 0.0);
    State(std::initializer_list<double> coords);
    explicit State(std::vector<double> coords);
    explicit State(std::span<const double> coords);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return coords_[i]; }
    [[nodiscard]] double& operator[](std::size_t i) noexcept { return coords_[i]; }

    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] std::span<double> coords() noexcept { return coords_; }
    [[nodiscard]] const double* data() const noexcept { return coords_.data(); }

    bool operator==(const State&) const = default;

    State& operator+=(const State& other);
    State& operator-=(const State& other);
    State& operator*=(double s) noexcept;

    friend State operator+(State a, const State& b) { return a += b; }
    friend State operator-(State a, const State& b) { return a -= b; }
    friend State operator*(State a, double s) noexcept { return a *= s; }
    friend State operator*(double s, State a) noexcept { return a *= s; }

private:
    std::vector<double> coords_;
};

/// Axis-aligned box bounding the configuration space. lower[i] < upper[i] on every axis.
class SpaceBounds {
public:
    SpaceBounds(State lower, State upper);

    [[nodiscard]] std::size_t dim() const noexcept { return lower_.dim(); }
    [[nodiscard]] const State& lower() const noexcept { return lower_; }
    [[nodiscard]] const State& upper() const noexcept { return upper_; }
    [[nodiscard]] double extent(std::size_t axis) const noexcept { return upper_[axis] - lower_[axis]; }
    [[nodiscard]] double diagonal() const noexcept;
    [[nodiscard]] double volume() const noexcept;

    [[nodiscard]] bool contains(std::span<const double> p) const noexcept;
    [[nodiscard]] State clamp(State p) const noexcept;
    /// Euclidean distance from p to the box; 0 when p is inside.
    [[nodiscard]] double distance_outside(std::span<const double> p) const noexcept;

private:
    State lower_;
    State upper_;
};

/// Reproducible random source.
///
/// The integer stream is std::mt19937_64 seeded with the 64-bit seed, which the
/// standard fixes bit-for-bit on every platform. Doubles are derived from it as
/// follows: uniform01() = (next_u64() >> 11) * 2^-53, and standard_normal()
/// is boost::random::normal_distribution (the Marsaglia-Tsang ziggurat) drawing
/// from the same engine.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform01();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer on [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);
    double standard_normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
};

/// SplitMix64 finalizer; derives independent sub-seeds from one base seed.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed) noexcept;

[[noreturn]] void throw_dimension_mismatch(std::size_t a, std::size_t b);

// Inline: these sit on every planner's inner loop.
[[nodiscard]] inline double squared_distance(const State& a, const State& b) {
    if (a.dim() != b.dim()) throw_dimension_mismatch(a.dim(), b.dim());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

[[nodiscard]] inline double distance(const State& a, const State& b) { return std::sqrt(squared_distance(a, b)); }

/// a + t (b - a). Exact at both ends: t == 0 yields a, t == 1 yields b.
[[nodiscard]] State interpolate(const State& a, const State& b, double t);

/// Isotropic Gaussian around mean with per-axis deviation sigma, clamped to bounds.
[[nodiscard]] State gaussian_sample(SeededRng& rng, const State& mean, double sigma,
                                    const SpaceBounds& bounds);
/// Same draw written into out, which is resized only when its dimension differs.
void gaussian_sample_into(SeededRng& rng, const State& mean, double sigma, const SpaceBounds& bounds,
                          State& out);

[[nodiscard]] State uniform_sample(SeededRng& rng, const SpaceBounds& bounds);

}  // namespace rmpd
