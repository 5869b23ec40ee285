#pragma once

// Reference sampling-based planners (RRT, RRT-Connect, RRT*, PRM) that share the space,
// world and collision-counting interfaces used by the recursive planners.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rmpd/planner.hpp"
#include "rmpd/space.hpp"
#include "rmpd/world.hpp"

namespace rmpd {

struct BaselineConfig {
    double step_size = 0.0;         ///< tree extension length; <= 0 selects 10 x collision step
    double goal_bias = 0.05;        ///< probability of sampling the goal (RRT, RRT*)
    double rewire_gamma = 0.0;      ///< RRT* radius constant; <= 0 selects the default formula
    std::size_t prm_k = 10;         ///< roadmap k-nearest connectivity
    std::size_t prm_samples = 500;  ///< roadmap vertex target (excluding the query endpoints)
    std::size_t max_iterations = 20000;
    double time_budget_s = 5.0;
    double collision_step = 0.0;    ///< <= 0 selects the world default

    void validate() const;
    [[nodiscard]] double resolved_step(const World& world) const noexcept;
    /// 2 (1 + 1/d)^(1/d) vol^(1/d) unless rewire_gamma is set.
    [[nodiscard]] double resolved_gamma(const World& world) const noexcept;
};

PlanResult plan_rrt(const World& world, CollisionCounter& counter, SeededRng& rng, const BaselineConfig& config,
                    const State& p_s, const State& p_g);

PlanResult plan_rrt_connect(const World& world, CollisionCounter& counter, SeededRng& rng,
                            const BaselineConfig& config, const State& p_s, const State& p_g);

struct RrtStarTrace {
    std::vector<double> best_history;   ///< best goal-path cost after each iteration once found
    std::size_t rewires = 0;
    double max_cost_increase = 0.0;     ///< largest cost_from_root change caused by a rewire (<= 0)
    bool tree_consistent = true;        ///< cost_from_root == parent cost + edge length at exit
};

/// Anytime RRT*: runs until max_iterations or the time budget and returns the best path found.
PlanResult plan_rrt_star(const World& world, CollisionCounter& counter, SeededRng& rng,
                         const BaselineConfig& config, const State& p_s, const State& p_g,
                         RrtStarTrace* trace = nullptr);

struct Roadmap {
    std::vector<State> vertices;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
    std::size_t start_index = 0;
    std::size_t goal_index = 0;
};

/// Uniform-cost search on the roadmap; ties broken by vertex index.
[[nodiscard]] std::optional<std::vector<std::size_t>> roadmap_shortest_path(const Roadmap& roadmap,
                                                                            std::size_t from, std::size_t to);

PlanResult plan_prm(const World& world, CollisionCounter& counter, SeededRng& rng, const BaselineConfig& config,
                    const State& p_s, const State& p_g, Roadmap* roadmap_out = nullptr);

}  // namespace rmpd
