#pragma once

// Recursive mid-point displacement planning: the plain recursion with a Gaussian free-state
// sampler (RMPD) and the cost-aware variant whose mid-points come from a softmax-weighted
// estimated-gradient search over clearance and smoothness costs (cRMPD).

#include <cstddef>
#include <span>
#include <vector>

#include "rmpd/planner.hpp"
#include "rmpd/sdf.hpp"
#include "rmpd/space.hpp"
#include "rmpd/world.hpp"

namespace rmpd {

enum class MidpointRule {
    weighted_average,  ///< p_m += sum_i w_i (p_i - p_m)
    greedy_min_cost,   ///< p_m = lowest-cost sample
};

enum class SeedRule {
    naive_midpoint,    ///< start the search at the incoming mid-point
    greedy_k_samples,  ///< first replace it by the lowest-cost of K samples around it
};

struct RmpdConfig {
    std::size_t n_max = 100;             ///< global mid-point budget
    double sigma_fraction = 1.0 / 6.0;   ///< sigma = sigma_fraction * |p_s - p_g|
    std::size_t max_sampler_iters = 20;  ///< Gaussian free-state sampler attempts
    double lambda = 0.5;                 ///< smoothness weight
    double h = 5.0;                      ///< softmax sharpness
    std::size_t k = 10;                  ///< samples per search iteration
    double epsilon = 1e-3;               ///< relative-absolute convergence tolerance
    std::size_t max_egd_iters = 50;
    MidpointRule midpoint_rule = MidpointRule::weighted_average;
    SeedRule seed_rule = SeedRule::naive_midpoint;
    double collision_step = 0.0;         ///< <= 0 selects the world default

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
    /// Recursion depth guard: ceil(log2(n_max)) + 8.
    [[nodiscard]] std::size_t max_depth() const noexcept;
};

struct CostTerms {
    double clearance = 0.0;
    double smoothness = 0.0;
    double total = 0.0;
};

/// |p_s - p| + |p - p_g| - |p_s - p_g|, clamped at 0 against round-off.
[[nodiscard]] double smoothness_cost(const State& p_s, const State& p, const State& p_g);

/// clearance + lambda * smoothness.
[[nodiscard]] CostTerms state_cost(const SignedDistanceField& sdf, const RmpdConfig& config,
                                   const State& p_s, const State& p, const State& p_g);

/// exp(-h c_i) / sum_j exp(-h c_j), evaluated shifted by the minimum cost.
[[nodiscard]] std::vector<double> softmax_weights(std::span<const double> costs, double h);

/// p_m + sum_i w_i (p_i - p_m).
[[nodiscard]] State weighted_update(const State& p_m, std::span<const State> samples,
                                    std::span<const double> weights);

/// Draws Gaussian samples around p_m until one is collision-free. After max_iters failures
/// the last failed candidate is returned.
State gaussian_free_state_sampler(SeededRng& rng, const World& world, CollisionCounter& counter,
                                  const State& p_m, double sigma, std::size_t max_iters);

/// Per-call record of the cost-aware search, for inspection.
struct CostAwareTrace {
    std::vector<double> costs;  ///< c = f(p_m) after every loop pass
    std::size_t iterations = 0;
    bool converged = false;     ///< exited through the epsilon test rather than the cap
};

/// Cost-aware mid-point search. Returns the final p_m whether or not it is collision-free;
/// it touches only the distance field, never the collision checker.
State cost_aware_free_state_sampler(SeededRng& rng, const World& world, const SignedDistanceField& sdf,
                                    const RmpdConfig& config, const State& p_s, const State& p_m,
                                    const State& p_g, CostAwareTrace* trace = nullptr);

PlanResult plan_rmpd(const World& world, CollisionCounter& counter, SeededRng& rng, const RmpdConfig& config,
                     const State& p_s, const State& p_g);

PlanResult plan_crmpd(const World& world, CollisionCounter& counter, SeededRng& rng,
                      const SignedDistanceField& sdf, const RmpdConfig& config, const State& p_s,
                      const State& p_g);

}  // namespace rmpd
