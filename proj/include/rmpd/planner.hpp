#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rmpd/space.hpp"
#include "rmpd/world.hpp"

namespace rmpd {

/// Ordered waypoint sequence. On success the first waypoint is the start and the last the goal.
struct Path {
    std::vector<State> waypoints;

    [[nodiscard]] std::size_t size() const noexcept { return waypoints.size(); }
    [[nodiscard]] bool empty() const noexcept { return waypoints.empty(); }
    [[nodiscard]] const State& front() const { return waypoints.front(); }
    [[nodiscard]] const State& back() const { return waypoints.back(); }
    bool operator==(const Path&) const = default;
};

enum class PlanStatus {
    success,
    invalid_endpoint,       ///< start or goal in collision
    midpoint_in_collision,  ///< a displaced mid-point failed the next recursion's endpoint check
    budget_exhausted,       ///< waypoint/depth/iteration budget used up
    time_budget_exhausted,
    no_path_in_roadmap,
};

[[nodiscard]] std::string_view status_name(PlanStatus status) noexcept;

/// Counters a planner reports alongside its result. Collision checks live in the
/// caller-owned CollisionCounter.
struct PlanStats {
    std::uint64_t segment_checks = 0;
    std::uint64_t sampler_calls = 0;
    std::uint64_t iterations = 0;
};

struct PlanResult {
    PlanStatus status = PlanStatus::budget_exhausted;
    Path path;
    PlanStats stats;

    [[nodiscard]] bool ok() const noexcept { return status == PlanStatus::success; }
};

/// Resolves a non-positive step to the world's default local-planner spacing.
[[nodiscard]] double resolve_collision_step(const World& world, double step) noexcept;

/// Sum of consecutive Euclidean distances.
[[nodiscard]] double path_length(const Path& path);

/// True iff every consecutive segment of the path passes is_segment_valid.
bool path_is_valid(const World& world, CollisionCounter& counter, const Path& path, double step);

}  // namespace rmpd
