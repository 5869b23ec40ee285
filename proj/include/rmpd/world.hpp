#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "rmpd/space.hpp"

namespace rmpd {

/// Counts point-validity queries for one trial. Optionally records every queried
/// state in order, which lets tests inspect the local planner's check order.
class CollisionCounter {
public:
    CollisionCounter() = default;
    explicit CollisionCounter(bool record) : recording_(record) {}

    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    void reset() noexcept {
        count_ = 0;
        log_.clear();
    }
    void note_query(const State& p) {
        ++count_;
        if (recording_) log_.push_back(p);
    }
    [[nodiscard]] bool recording() const noexcept { return recording_; }
    [[nodiscard]] const std::vector<State>& log() const noexcept { return log_; }

private:
    std::uint64_t count_ = 0;
    bool recording_ = false;
    std::vector<State> log_;
};

/// Immutable obstacle environment. Points outside bounds() are in collision.
class World {
public:
    virtual ~World() = default;

    [[nodiscard]] std::size_t dim() const noexcept { return bounds().dim(); }
    [[nodiscard]] virtual const SpaceBounds& bounds() const noexcept = 0;

    /// Raw, uncounted occupancy test. Planners go through is_state_valid instead.
    [[nodiscard]] virtual bool in_collision(std::span<const double> p) const = 0;

    /// Raw, uncounted continuous test: true iff some point of the closed segment [a, b] is in
    /// collision. Symmetric in a and b.
    [[nodiscard]] virtual bool segment_in_collision(std::span<const double> a, std::span<const double> b) const = 0;

    /// Spacing used by the local planner when the caller does not set one.
    [[nodiscard]] virtual double default_collision_step() const noexcept = 0;
    /// Cell edge used for the signed distance field when the caller does not set one.
    [[nodiscard]] virtual double default_sdf_resolution() const noexcept = 0;
};

/// 2-D occupancy bitmap. Cell (ix, iy) covers
/// [origin.x + ix*cell, origin.x + (ix+1)*cell) x [origin.y + iy*cell, ...), with iy = 0 at the
/// bottom of the map.
class BitmapWorld final : public World {
public:
    /// occupancy is row-major with row 0 at the bottom; true marks an obstacle.
    BitmapWorld(std::size_t width, std::size_t height, std::vector<bool> occupancy,
                double cell_size = 1.0, State origin = State{0.0, 0.0});

    [[nodiscard]] const SpaceBounds& bounds() const noexcept override { return bounds_; }
    [[nodiscard]] bool in_collision(std::span<const double> p) const override;
    [[nodiscard]] bool segment_in_collision(std::span<const double> a, std::span<const double> b) const override;
    [[nodiscard]] double default_collision_step() const noexcept override { return 0.5 * cell_size_; }
    [[nodiscard]] double default_sdf_resolution() const noexcept override { return cell_size_; }

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] double cell_size() const noexcept { return cell_size_; }
    [[nodiscard]] const State& origin() const noexcept { return bounds_.lower(); }
    [[nodiscard]] bool occupied(std::size_t ix, std::size_t iy) const noexcept {
        return occupancy_[iy * width_ + ix];
    }
    [[nodiscard]] std::size_t occupied_count() const noexcept;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<bool> occupancy_;
    double cell_size_;
    SpaceBounds bounds_;
};

struct BoxObstacle {
    State lower;
    State upper;
};

struct SphereObstacle {
    State center;
    double radius;
};

using Obstacle = std::variant<BoxObstacle, SphereObstacle>;

/// n-D world of axis-aligned boxes and n-spheres. Boxes are closed sets; spheres contain
/// points at distance <= radius from the center.
class GeometricWorld final : public World {
public:
    /// Throws std::invalid_argument when an obstacle is malformed or misses the bounds.
    GeometricWorld(SpaceBounds bounds, std::vector<Obstacle> obstacles);

    [[nodiscard]] const SpaceBounds& bounds() const noexcept override { return bounds_; }
    [[nodiscard]] bool in_collision(std::span<const double> p) const override;
    [[nodiscard]] bool segment_in_collision(std::span<const double> a, std::span<const double> b) const override;
    [[nodiscard]] double default_collision_step() const noexcept override;
    [[nodiscard]] double default_sdf_resolution() const noexcept override;

    [[nodiscard]] const std::vector<Obstacle>& obstacles() const noexcept { return obstacles_; }

private:
    SpaceBounds bounds_;
    std::vector<Obstacle> obstacles_;
};

/// Counted point query: true iff p is inside bounds and in no obstacle.
bool is_state_valid(const World& world, CollisionCounter& counter, const State& p);

/// Number of uniformly spaced intervals used to discretize a segment of the given length:
/// the smallest even count whose spacing is <= step (0 for a degenerate segment).
[[nodiscard]] std::size_t segment_intervals(double length, double step);

/// Check order over discretization indices 0..intervals: the mid-point first, then
/// alternating m-1, m+1, m-2, m+2, ... out to both ends.
[[nodiscard]] std::vector<std::size_t> middle_out_order(std::size_t intervals);

/// The i-th of intervals+1 discretization points of segment (a, b), computed from the nearer
/// end so that reversing the segment reproduces the same points bitwise.
[[nodiscard]] State segment_point(const State& a, const State& b, std::size_t i, std::size_t intervals);

/// Bidirectional local planner: marches out from the mid-point alternately toward both ends
/// and stops at the first invalid point. Once every discretization point passes, an uncounted
/// continuous sweep rejects segments that clip an obstacle between two points.
bool is_segment_valid(const World& world, CollisionCounter& counter, const State& a, const State& b,
                      double step);

}  // namespace rmpd
