#include "rmpd/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmpd {

namespace {

SpaceBounds bitmap_bounds(std::size_t width, std::size_t height, double cell_size, const State& origin) {
    if (width == 0 || height == 0) throw std::invalid_argument("bitmap must be at least 1x1");
    if (!(cell_size > 0.0)) throw std::invalid_argument("bitmap cell_size must be positive");
    if (origin.dim() != 2) throw std::invalid_argument("bitmap origin must be 2-D");
    return SpaceBounds(origin, State{origin[0] + static_cast<double>(width) * cell_size,
                                     origin[1] + static_cast<double>(height) * cell_size});
}

// Total cell budget for automatically sized distance fields.
constexpr double kAutoSdfCells = 4.0e6;

// Relative slack that makes the analytic sweep err on the side of collision.
constexpr double kSweepSlack = 1e-9;

// Fixed argument order so that (a, b) and (b, a) run the same arithmetic.
bool ordered(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

BitmapWorld::BitmapWorld(std::size_t width, std::size_t height, std::vector<bool> occupancy,
                         double cell_size, State origin)
    : width_(width),
      height_(height),
      occupancy_(std::move(occupancy)),
      cell_size_(cell_size),
      bounds_(bitmap_bounds(width, height, cell_size, origin)) {
    if (occupancy_.size() != width_ * height_) {
        throw std::invalid_argument("bitmap occupancy size does not match width*height");
    }
}

bool BitmapWorld::in_collision(std::span<const double> p) const {
    if (p.size() != 2) throw std::invalid_argument("bitmap query must be 2-D");
    const double fx = std::floor((p[0] - origin()[0]) / cell_size_);
    const double fy = std::floor((p[1] - origin()[1]) / cell_size_);
    if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(width_) || fy >= static_cast<double>(height_)) {
        return true;
    }
    return occupied(static_cast<std::size_t>(fx), static_cast<std::size_t>(fy));
}

bool BitmapWorld::segment_in_collision(std::span<const double> a, std::span<const double> b) const {
    if (a.size() != 2 || b.size() != 2) throw std::invalid_argument("bitmap query must be 2-D");
    if (ordered(a, b)) std::swap(a, b);
    // Parameters where the segment crosses a grid line; between two consecutive ones it stays in
    // a single cell, so probing each crossing and each gap midpoint visits every touched cell.
    std::vector<double> ts{0.0, 1.0};
    for (std::size_t d = 0; d < 2; ++d) {
        const double u0 = (a[d] - origin()[d]) / cell_size_;
        const double u1 = (b[d] - origin()[d]) / cell_size_;
        if (u0 == u1) continue;
        const double lo = std::min(u0, u1);
        const double hi = std::max(u0, u1);
        for (double k = std::ceil(lo); k <= hi; k += 1.0) ts.push_back((k - u0) / (u1 - u0));
    }
    std::sort(ts.begin(), ts.end());
    std::array<double, 2> p{};
    auto hit = [&](double t) {
        for (std::size_t d = 0; d < 2; ++d) p[d] = a[d] + t * (b[d] - a[d]);
        return in_collision(p);
    };
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (hit(ts[i])) return true;
        if (i + 1 < ts.size() && ts[i + 1] > ts[i] && hit(0.5 * (ts[i] + ts[i + 1]))) return true;
    }
    return false;
}

std::size_t BitmapWorld::occupied_count() const noexcept {
    return static_cast<std::size_t>(std::count(occupancy_.begin(), occupancy_.end(), true));
}

GeometricWorld::GeometricWorld(SpaceBounds bounds, std::vector<Obstacle> obstacles)
    : bounds_(std::move(bounds)), obstacles_(std::move(obstacles)) {
    const std::size_t n = bounds_.dim();
    for (std::size_t k = 0; k < obstacles_.size(); ++k) {
        const std::string where = "obstacle " + std::to_string(k);
        if (const auto* box = std::get_if<BoxObstacle>(&obstacles_[k])) {
            if (box->lower.dim() != n || box->upper.dim() != n) {
                throw std::invalid_argument(where + ": box dimension does not match the world");
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (!(box->lower[i] <= box->upper[i])) {
                    throw std::invalid_argument(where + ": box lower exceeds upper on axis " + std::to_string(i));
                }
                if (box->upper[i] < bounds_.lower()[i] || box->lower[i] > bounds_.upper()[i]) {
                    throw std::invalid_argument(where + ": box does not intersect the bounds");
                }
            }
        } else {
            const auto& sphere = std::get<SphereObstacle>(obstacles_[k]);
            if (sphere.center.dim() != n) {
                throw std::invalid_argument(where + ": sphere dimension does not match the world");
            }
            if (!(sphere.radius > 0.0) || !std::isfinite(sphere.radius)) {
                throw std::invalid_argument(where + ": sphere radius must be positive");
            }
            if (bounds_.distance_outside(sphere.center.coords()) > sphere.radius) {
                throw std::invalid_argument(where + ": sphere does not intersect the bounds");
            }
        }
    }
}

bool GeometricWorld::in_collision(std::span<const double> p) const {
    if (p.size() != dim()) throw std::invalid_argument("query dimension does not match the world");
    if (!bounds_.contains(p)) return true;
    for (const Obstacle& obstacle : obstacles_) {
        if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
            bool inside = true;
            for (std::size_t i = 0; i < p.size() && inside; ++i) {
                inside = p[i] >= box->lower[i] && p[i] <= box->upper[i];
            }
            if (inside) return true;
        } else {
            const auto& sphere = std::get<SphereObstacle>(obstacle);
            double d2 = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double d = p[i] - sphere.center[i];
                d2 += d * d;
            }
            if (d2 <= sphere.radius * sphere.radius) return true;
        }
    }
    return false;
}

bool GeometricWorld::segment_in_collision(std::span<const double> a, std::span<const double> b) const {
    if (a.size() != dim() || b.size() != dim()) throw std::invalid_argument("query dimension does not match the world");
    if (ordered(a, b)) std::swap(a, b);
    // The bounds are convex, so the endpoints decide containment.
    if (!bounds_.contains(a) || !bounds_.contains(b)) return true;
    const std::size_t n = a.size();
    for (const Obstacle& obstacle : obstacles_) {
        if (const auto* box = std::get_if<BoxObstacle>(&obstacle)) {
            // Slab clipping of t in [0, 1] against the slightly grown box.
            double t0 = 0.0;
            double t1 = 1.0;
            for (std::size_t i = 0; i < n && t0 <= t1; ++i) {
                const double slack = kSweepSlack * (1.0 + std::abs(box->lower[i]) + std::abs(box->upper[i]));
                const double lo = box->lower[i] - slack;
                const double hi = box->upper[i] + slack;
                const double dir = b[i] - a[i];
                if (dir == 0.0) {
                    if (a[i] < lo || a[i] > hi) t0 = 2.0;
                    continue;
                }
                double ta = (lo - a[i]) / dir;
                double tb = (hi - a[i]) / dir;
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
            }
            if (t0 <= t1) return true;
        } else {
            const auto& sphere = std::get<SphereObstacle>(obstacle);
            double dd = 0.0;
            double dc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dir = b[i] - a[i];
                dd += dir * dir;
                dc += dir * (sphere.center[i] - a[i]);
            }
            const double t = dd > 0.0 ? std::clamp(dc / dd, 0.0, 1.0) : 0.0;
            double d2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = a[i] + t * (b[i] - a[i]) - sphere.center[i];
                d2 += d * d;
            }
            const double r = sphere.radius * (1.0 + kSweepSlack);
            if (d2 <= r * r) return true;
        }
    }
    return false;
}

double GeometricWorld::default_collision_step() const noexcept { return bounds_.diagonal() / 200.0; }

double GeometricWorld::default_sdf_resolution() const noexcept {
    const double per_axis = std::clamp(std::floor(std::pow(kAutoSdfCells, 1.0 / static_cast<double>(dim()))),
                                       4.0, 256.0);
    double widest = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) widest = std::max(widest, bounds_.extent(i));
    return widest / per_axis;
}

bool is_state_valid(const World& world, CollisionCounter& counter, const State& p) {
    if (p.dim() != world.dim()) {
        throw std::invalid_argument("is_state_valid: state dimension " + std::to_string(p.dim()) +
                                    " does not match world dimension " + std::to_string(world.dim()));
    }
    counter.note_query(p);
    return !world.in_collision(p.coords());
}

std::size_t segment_intervals(double length, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("segment step must be positive");
    if (length <= 0.0) return 0;
    const double halves = std::ceil(length / (2.0 * step));
    return 2 * static_cast<std::size_t>(std::max(1.0, halves));
}

std::vector<std::size_t> middle_out_order(std::size_t intervals) {
    std::vector<std::size_t> order;
    order.reserve(intervals + 1);
    const std::size_t mid = intervals / 2;
    order.push_back(mid);
    for (std::size_t k = 1; k <= mid || mid + k <= intervals; ++k) {
        if (k <= mid) order.push_back(mid - k);
        if (mid + k <= intervals) order.push_back(mid + k);
    }
    return order;
}

namespace {

void segment_point_into(const State& a, const State& b, std::size_t i, std::size_t intervals, State& out) {
    const std::size_t n = a.dim();
    if (intervals == 0 || i == 0) {
        for (std::size_t d = 0; d < n; ++d) out[d] = a[d];
    } else if (i == intervals) {
        for (std::size_t d = 0; d < n; ++d) out[d] = b[d];
    } else if (2 * i == intervals) {
        for (std::size_t d = 0; d < n; ++d) out[d] = 0.5 * (a[d] + b[d]);
    } else if (2 * i < intervals) {
        const double t = static_cast<double>(i) / static_cast<double>(intervals);
        for (std::size_t d = 0; d < n; ++d) out[d] = a[d] + t * (b[d] - a[d]);
    } else {
        const double t = static_cast<double>(intervals - i) / static_cast<double>(intervals);
        for (std::size_t d = 0; d < n; ++d) out[d] = b[d] + t * (a[d] - b[d]);
    }
}

}  // namespace

State segment_point(const State& a, const State& b, std::size_t i, std::size_t intervals) {
    State out(a.dim());
    segment_point_into(a, b, i, intervals, out);
    return out;
}

bool is_segment_valid(const World& world, CollisionCounter& counter, const State& a, const State& b,
                      double step) {
    const std::size_t intervals = segment_intervals(distance(a, b), step);
    // Same visiting order as middle_out_order, without materializing it.
    const std::size_t mid = intervals / 2;
    State point(a.dim());
    auto valid = [&](std::size_t i) {
        segment_point_into(a, b, i, intervals, point);
        return is_state_valid(world, counter, point);
    };
    if (!valid(mid)) return false;
    for (std::size_t k = 1; k <= mid || mid + k <= intervals; ++k) {
        if (k <= mid && !valid(mid - k)) return false;
        if (mid + k <= intervals && !valid(mid + k)) return false;
    }
    return intervals == 0 || !world.segment_in_collision(a.coords(), b.coords());
}

}  // namespace rmpd
