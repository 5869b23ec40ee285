#pragma once

// Path shortcutting, corner-cut smoothing and the path quality metrics.

#include <cstddef>
#include <span>
#include <vector>

#include "rmpd/planner.hpp"
#include "rmpd/space.hpp"
#include "rmpd/world.hpp"

namespace rmpd {

struct PostprocessParams {
    std::size_t shortcut_attempts_per_waypoint = 50;
    std::size_t spline_rounds = 2;
    std::size_t smoothness_samples = 100;  // M
    double collision_step = 0.0;           // <= 0: world default

    void validate() const;
};

struct SmoothedPath {
    Path path;
    Path raw;
    PostprocessParams params;
};

struct PathMetrics {
    double length = 0.0;
    double q_smt = 0.0;
    std::size_t waypoint_count = 0;
};

/// Random chord shortcutting. Picks two arc-length positions, splices in their chord when it
/// is strictly shorter and valid, then drops waypoints that lie on the chord of their
/// neighbours.
Path shortcut(const World& world, CollisionCounter& counter, SeededRng& rng, const Path& path,
              std::size_t attempts, double step = 0.0);

/// `rounds` passes of 1/4-3/4 corner cutting. Corners whose new segments fail validation keep
/// their original vertex.
SmoothedPath spline_smooth(const World& world, CollisionCounter& counter, const Path& path, std::size_t rounds,
                           double step = 0.0);

/// Shortcut then smooth with the given parameters.
SmoothedPath postprocess(const World& world, CollisionCounter& counter, SeededRng& rng, const Path& raw,
                         const PostprocessParams& params);

/// m points at equal arc-length spacing along the polyline.
/// Throws std::invalid_argument if the path has < 2 waypoints or m < max(2, waypoints).
[[nodiscard]] Path upsample_uniform(const Path& path, std::size_t m);

/// Arc-length positions of every waypoint, starting at 0.
[[nodiscard]] std::vector<double> cumulative_arc_length(const Path& path);

/// Sum of row norms of A·theta with A the M x M finite-difference matrix
/// (row 0 = e1, row 1 = (-2, 1), rows i >= 2 = (1, -2, 1) at columns i-2..i).
[[nodiscard]] double finite_difference_norm_sum(std::span<const State> theta);

/// Smoothness of the path resampled to m waypoints. Requires m >= 3 and a non-empty path.
[[nodiscard]] double smoothness_q(const Path& path, std::size_t m);

[[nodiscard]] PathMetrics measure_path(const Path& path, std::size_t m);

}  // namespace rmpd
