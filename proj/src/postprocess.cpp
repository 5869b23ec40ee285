#include "rmpd/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rmpd {

void PostprocessParams::validate() const {
    if (shortcut_attempts_per_waypoint == 0) throw std::invalid_argument("shortcut attempts must be positive");
    if (spline_rounds == 0) throw std::invalid_argument("spline rounds must be positive");
    if (smoothness_samples < 3) throw std::invalid_argument("smoothness samples must be at least 3");
}

std::vector<double> cumulative_arc_length(const Path& path) {
    std::vector<double> s(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i) s[i] = s[i - 1] + distance(path.waypoints[i - 1], path.waypoints[i]);
    return s;
}

namespace {

struct ArcPoint {
    std::size_t segment;  // index of the segment's first waypoint
    State point;
};

ArcPoint point_at(const Path& path, const std::vector<double>& s, double arc) {
    const std::size_t last = path.size() - 1;
    if (arc <= 0.0) return {0, path.front()};
    if (arc >= s[last]) return {last - 1, path.back()};
    auto it = std::upper_bound(s.begin(), s.end(), arc);
    const std::size_t seg = static_cast<std::size_t>(it - s.begin()) - 1;
    const double len = s[seg + 1] - s[seg];
    if (len <= 0.0) return {seg, path.waypoints[seg]};
    const double t = std::clamp((arc - s[seg]) / len, 0.0, 1.0);
    return {seg, interpolate(path.waypoints[seg], path.waypoints[seg + 1], t)};
}

void push_distinct(std::vector<State>& out, const State& p) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
}

// Drops duplicates and waypoints lying on their neighbours' chord, keeping the chord only
// when it validates.
Path prune_collinear(const World& world, CollisionCounter& counter, const Path& path, double step) {
    std::vector<State> pts;
    for (const State& p : path.waypoints) push_distinct(pts, p);
    if (pts.size() < 3) return Path{pts};
    const double scale = 1e-12 * (1.0 + path_length(Path{pts}));
    std::vector<State> out{pts.front()};
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const State& prev = out.back();
        const State& next = pts[k + 1];
        const double slack = distance(prev, pts[k]) + distance(pts[k], next) - distance(prev, next);
        if (slack <= scale && is_segment_valid(world, counter, prev, next, step)) continue;
        out.push_back(pts[k]);
    }
    out.push_back(pts.back());
    return Path{out};
}

std::vector<double> segment_key(const State& a, const State& b) {
    std::vector<double> key(a.coords().begin(), a.coords().end());
    key.insert(key.end(), b.coords().begin(), b.coords().end());
    return key;
}

}  // namespace

Path shortcut(const World& world, CollisionCounter& counter, SeededRng& rng, const Path& path,
              std::size_t attempts, double step) {
    if (path.size() < 3) return path;
    step = resolve_collision_step(world, step);
    Path current = path;
    for (std::size_t a = 0; a < attempts && current.size() >= 3; ++a) {
        const std::vector<double> s = cumulative_arc_length(current);
        const double total = s.back();
        double s1 = rng.uniform(0.0, total);
        double s2 = rng.uniform(0.0, total);
        if (s1 > s2) std::swap(s1, s2);
        const ArcPoint p1 = point_at(current, s, s1);
        const ArcPoint p2 = point_at(current, s, s2);
        if (p1.segment == p2.segment) continue;
        const double chord = distance(p1.point, p2.point);
        if (!(chord < (s2 - s1) - 1e-12 * total)) continue;
        if (!is_segment_valid(world, counter, p1.point, p2.point, step)) continue;
        std::vector<State> next(current.waypoints.begin(), current.waypoints.begin() + p1.segment + 1);
        push_distinct(next, p1.point);
        push_distinct(next, p2.point);
        for (std::size_t i = p2.segment + 1; i < current.size(); ++i) push_distinct(next, current.waypoints[i]);
        current.waypoints = std::move(next);
    }
    return prune_collinear(world, counter, current, step);
}

SmoothedPath spline_smooth(const World& world, CollisionCounter& counter, const Path& path, std::size_t rounds,
                           double step) {
    step = resolve_collision_step(world, step);
    SmoothedPath result{path, path, {}};
    result.params.spline_rounds = rounds;
    result.params.collision_step = step;
    std::map<std::vector<double>, bool> verdicts;
    auto valid = [&](const State& a, const State& b) {
        auto [it, fresh] = verdicts.try_emplace(segment_key(a, b), false);
        if (fresh) it->second = is_segment_valid(world, counter, a, b, step);
        return it->second;
    };

    for (std::size_t round = 0; round < rounds; ++round) {
        const std::vector<State>& pts = result.path.waypoints;
        const std::size_t n = pts.size();
        if (n < 3) break;
        std::vector<bool> cut(n, false);
        for (std::size_t k = 1; k + 1 < n; ++k) cut[k] = true;

        // Each waypoint k becomes [in_k, out_k]: the cut points if cut, else the vertex twice.
        auto in_point = [&](std::size_t k) {
            return cut[k] ? interpolate(pts[k - 1], pts[k], 0.75) : pts[k];
        };
        auto out_point = [&](std::size_t k) {
            return cut[k] ? interpolate(pts[k], pts[k + 1], 0.25) : pts[k];
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t k = 1; k + 1 < n; ++k) {
                if (cut[k] && !valid(in_point(k), out_point(k))) {
                    cut[k] = false;
                    changed = true;
                }
            }
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const State a = k == 0 ? pts[0] : out_point(k);
                const State b = k + 1 == n - 1 ? pts[n - 1] : in_point(k + 1);
                if (valid(a, b)) continue;
                // The span between two corners failed: both give up their cut.
                if (k > 0 && cut[k]) cut[k] = false, changed = true;
                if (k + 1 < n - 1 && cut[k + 1]) cut[k + 1] = false, changed = true;
            }
        }
        std::vector<State> next{pts.front()};
        for (std::size_t k = 1; k + 1 < n; ++k) {
            push_distinct(next, in_point(k));
            push_distinct(next, out_point(k));
        }
        push_distinct(next, pts.back());
        if (next == pts) break;
        result.path.waypoints = std::move(next);
    }
    return result;
}

SmoothedPath postprocess(const World& world, CollisionCounter& counter, SeededRng& rng, const Path& raw,
                         const PostprocessParams& params) {
    params.validate();
    const double step = resolve_collision_step(world, params.collision_step);
    const Path cut = shortcut(world, counter, rng, raw, params.shortcut_attempts_per_waypoint * raw.size(), step);
    SmoothedPath smoothed = spline_smooth(world, counter, cut, params.spline_rounds, step);
    smoothed.raw = raw;
    smoothed.params = params;
    smoothed.params.collision_step = step;
    return smoothed;
}

Path upsample_uniform(const Path& path, std::size_t m) {
    if (path.size() < 2) throw std::invalid_argument("upsample_uniform needs at least 2 waypoints");
    if (m < 2 || m < path.size()) throw std::invalid_argument("upsample_uniform needs m >= waypoint count");
    const std::vector<double> s = cumulative_arc_length(path);
    Path out;
    out.waypoints.reserve(m);
    out.waypoints.push_back(path.front());
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double arc = s.back() * static_cast<double>(i) / static_cast<double>(m - 1);
        out.waypoints.push_back(point_at(path, s, arc).point);
    }
    out.waypoints.push_back(path.back());
    return out;
}

double finite_difference_norm_sum(std::span<const State> theta) {
    const std::size_t m = theta.size();
    if (m == 0) return 0.0;
    const std::size_t dim = theta[0].dim();
    auto norm = [&](auto&& component) {
        double sq = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double v = component(d);
            sq += v * v;
        }
        return std::sqrt(sq);
    };
    double total = norm([&](std::size_t d) { return theta[0][d]; });
    if (m >= 2) total += norm([&](std::size_t d) { return theta[1][d] - 2.0 * theta[0][d]; });
    for (std::size_t j = 1; j + 1 < m; ++j) {
        total += norm([&](std::size_t d) { return theta[j - 1][d] - 2.0 * theta[j][d] + theta[j + 1][d]; });
    }
    return total;
}

double smoothness_q(const Path& path, std::size_t m) {
    if (m < 3) throw std::invalid_argument("smoothness_q needs m >= 3");
    if (path.empty()) throw std::invalid_argument("smoothness_q needs a non-empty path");
    std::vector<State> theta;
    if (path.size() == 1) {
        theta.assign(m, path.front());
    } else {
        const std::vector<double> s = cumulative_arc_length(path);
        theta.reserve(m);
        theta.push_back(path.front());
        for (std::size_t i = 1; i + 1 < m; ++i) {
            theta.push_back(point_at(path, s, s.back() * static_cast<double>(i) / static_cast<double>(m - 1)).point);
        }
        theta.push_back(path.back());
    }
    return finite_difference_norm_sum(theta);
}

PathMetrics measure_path(const Path& path, std::size_t m) {
    PathMetrics metrics;
    metrics.length = path_length(path);
    metrics.q_smt = smoothness_q(path, m);
    metrics.waypoint_count = path.size();
    return metrics;
}

}  // namespace rmpd
