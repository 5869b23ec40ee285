#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "rmpd/planner.hpp"
#include "rmpd/space.hpp"
#include "rmpd/world.hpp"

namespace rmpd::fixtures {

inline GeometricWorld empty_world(std::size_t dim, double extent = 10.0) {
    return GeometricWorld(SpaceBounds(State(dim, 0.0), State(dim, extent)), {});
}

inline GeometricWorld box_world(const State& lower, const State& upper, const State& box_lo, const State& box_hi) {
    return GeometricWorld(SpaceBounds(lower, upper), {BoxObstacle{box_lo, box_hi}});
}

// Independent replay checker: plain linear march at spacing <= step, raw occupancy queries,
// no shared discretization code with the planners.
inline bool replay_valid(const World& world, const Path& path, double step) {
    if (path.empty()) return false;
    auto free = [&](const State& p) { return world.bounds().contains(p.coords()) && !world.in_collision(p.coords()); };
    if (!free(path.front())) return false;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const State& a = path.waypoints[i - 1];
        const State& b = path.waypoints[i];
        double len2 = 0.0;
        for (std::size_t d = 0; d < a.dim(); ++d) len2 += (b[d] - a[d]) * (b[d] - a[d]);
        const auto n = static_cast<std::size_t>(std::ceil(std::sqrt(len2) / step));
        std::vector<double> p(a.dim());
        for (std::size_t k = 1; k <= std::max<std::size_t>(n, 1); ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n, 1));
            for (std::size_t d = 0; d < a.dim(); ++d) p[d] = a[d] + t * (b[d] - a[d]);
            if (k == std::max<std::size_t>(n, 1)) p.assign(b.coords().begin(), b.coords().end());
            if (!world.bounds().contains(p) || world.in_collision(p)) return false;
        }
    }
    return true;
}

inline State random_state(std::mt19937_64& gen, std::size_t dim, double lo = -5.0, double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    State s(dim);
    for (std::size_t d = 0; d < dim; ++d) s[d] = u(gen);
    return s;
}

}  // namespace rmpd::fixtures
