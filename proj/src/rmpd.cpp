#include "rmpd/rmpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmpd {

std::string_view status_name(PlanStatus status) noexcept {
    switch (status) {
        case PlanStatus::success: return "success";
        case PlanStatus::invalid_endpoint: return "invalid_endpoint";
        case PlanStatus::midpoint_in_collision: return "midpoint_in_collision";
        case PlanStatus::budget_exhausted: return "budget_exhausted";
        case PlanStatus::time_budget_exhausted: return "time_budget_exhausted";
        case PlanStatus::no_path_in_roadmap: return "no_path_in_roadmap";
    }
    return "unknown";
}

double resolve_collision_step(const World& world, double step) noexcept {
    return step > 0.0 ? step : world.default_collision_step();
}

double path_length(const Path& path) {
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) total += distance(path.waypoints[i - 1], path.waypoints[i]);
    return total;
}

bool path_is_valid(const World& world, CollisionCounter& counter, const Path& path, double step) {
    if (path.empty()) return false;
    if (path.size() == 1) return is_state_valid(world, counter, path.front());
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!is_segment_valid(world, counter, path.waypoints[i - 1], path.waypoints[i], step)) return false;
    }
    return true;
}

void RmpdConfig::validate() const {
    if (n_max == 0) throw std::invalid_argument("n_max must be positive");
    if (!(sigma_fraction > 0.0)) throw std::invalid_argument("sigma_fraction must be positive");
    if (max_sampler_iters == 0) throw std::invalid_argument("max_sampler_iters must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_egd_iters == 0) throw std::invalid_argument("max_egd_iters must be positive");
}

std::size_t RmpdConfig::max_depth() const noexcept {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n_max) ++bits;
    return bits + 8;
}

double smoothness_cost(const State& p_s, const State& p, const State& p_g) {
    const double slack = distance(p_s, p) + distance(p, p_g) - distance(p_s, p_g);
    return std::max(0.0, slack);
}

CostTerms state_cost(const SignedDistanceField& sdf, const RmpdConfig& config, const State& p_s,
                     const State& p, const State& p_g) {
    CostTerms terms;
    terms.clearance = clearance_cost(sdf, p);
    terms.smoothness = smoothness_cost(p_s, p, p_g);
    terms.total = terms.clearance + config.lambda * terms.smoothness;
    return terms;
}

std::vector<double> softmax_weights(std::span<const double> costs, double h) {
    if (costs.empty()) return {};
    const double lowest = *std::min_element(costs.begin(), costs.end());
    std::vector<double> weights(costs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        weights[i] = std::exp(-h * (costs[i] - lowest));
        sum += weights[i];
    }
    for (double& w : weights) w /= sum;
    return weights;
}

State weighted_update(const State& p_m, std::span<const State> samples, std::span<const double> weights) {
    if (samples.size() != weights.size()) throw std::invalid_argument("weighted_update: size mismatch");
    State delta(p_m.dim());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t d = 0; d < p_m.dim(); ++d) delta[d] += weights[i] * (samples[i][d] - p_m[d]);
    }
    return p_m + delta;
}

State gaussian_free_state_sampler(SeededRng& rng, const World& world, CollisionCounter& counter,
                                  const State& p_m, double sigma, std::size_t max_iters) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_free_state_sampler requires sigma > 0");
    if (max_iters == 0) throw std::invalid_argument("gaussian_free_state_sampler requires max_iters > 0");
    State candidate = p_m;
    for (std::size_t i = 0; i < max_iters; ++i) {
        gaussian_sample_into(rng, p_m, sigma, world.bounds(), candidate);
        if (is_state_valid(world, counter, candidate)) return candidate;
    }
    return candidate;
}

State cost_aware_free_state_sampler(SeededRng& rng, const World& world, const SignedDistanceField& sdf,
                                    const RmpdConfig& config, const State& p_s, const State& p_m_in,
                                    const State& p_g, CostAwareTrace* trace) {
    config.validate();
    const double sigma = config.sigma_fraction * distance(p_s, p_g);
    if (!(sigma > 0.0)) throw std::invalid_argument("cost-aware sampler requires p_s != p_g");
    const SpaceBounds& bounds = world.bounds();
    const double chord = distance(p_s, p_g);
    // Same value as state_cost(...).total with the chord length hoisted out of the loop.
    auto cost = [&](const State& p) {
        const double smt = std::max(0.0, distance(p_s, p) + distance(p, p_g) - chord);
        return clearance_cost(sdf, p) + config.lambda * smt;
    };

    const std::size_t dim = p_m_in.dim();
    std::vector<State> samples(config.k, State(dim));
    std::vector<double> costs(config.k);
    auto draw = [&](const State& mean) {
        for (std::size_t i = 0; i < config.k; ++i) {
            gaussian_sample_into(rng, mean, sigma, bounds, samples[i]);
            costs[i] = cost(samples[i]);
        }
    };
    auto lowest = [&]() {
        return static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());
    };

    State p_m = p_m_in;
    if (config.seed_rule == SeedRule::greedy_k_samples) {
        draw(p_m);
        p_m = samples[lowest()];
    }

    double c = std::numeric_limits<double>::infinity();
    State delta(dim);
    std::vector<double> weights;
    std::size_t iterations = 0;
    bool converged = false;
    while (true) {
        const double c_prev = c;
        p_m += delta;
        draw(p_m);
        if (config.midpoint_rule == MidpointRule::weighted_average) {
            weights = softmax_weights(costs, config.h);
            for (std::size_t d = 0; d < dim; ++d) {
                double sum = 0.0;
                for (std::size_t i = 0; i < config.k; ++i) sum += weights[i] * (samples[i][d] - p_m[d]);
                delta[d] = sum;
            }
        } else {
            const State& best = samples[lowest()];
            for (std::size_t d = 0; d < dim; ++d) delta[d] = best[d] - p_m[d];
        }
        c = cost(p_m);
        ++iterations;
        if (trace != nullptr) trace->costs.push_back(c);
        if (std::isfinite(c_prev) && c_prev - c <= config.epsilon * (1.0 + std::abs(c_prev))) {
            converged = true;
            break;
        }
        if (iterations >= config.max_egd_iters) break;
    }
    if (trace != nullptr) {
        trace->iterations = iterations;
        trace->converged = converged;
    }
    return p_m;
}

namespace {

class Recursion {
public:
    Recursion(const World& world, CollisionCounter& counter, SeededRng& rng, const RmpdConfig& config,
              const SignedDistanceField* sdf, PlanResult& result)
        : world_(world),
          counter_(counter),
          rng_(rng),
          config_(config),
          sdf_(sdf),
          step_(resolve_collision_step(world, config.collision_step)),
          result_(result) {}

    bool run(const State& p_s, const State& p_g, std::size_t depth) {
        if (!is_state_valid(world_, counter_, p_s) || !is_state_valid(world_, counter_, p_g)) {
            result_.status = depth == 0 ? PlanStatus::invalid_endpoint : PlanStatus::midpoint_in_collision;
            return false;
        }
        ++result_.stats.segment_checks;
        if (is_segment_valid(world_, counter_, p_s, p_g, step_)) {
            result_.path.waypoints.push_back(p_g);
            return true;
        }
        if (midpoints_ >= config_.n_max || depth >= config_.max_depth()) {
            result_.status = PlanStatus::budget_exhausted;
            return false;
        }
        ++midpoints_;

        const State p_m = interpolate(p_s, p_g, 0.5);
        State p_f;
        if (sdf_ != nullptr) {
            // The cost-aware search refines every blocked segment's mid-point, free or not.
            ++result_.stats.sampler_calls;
            p_f = cost_aware_free_state_sampler(rng_, world_, *sdf_, config_, p_s, p_m, p_g);
        } else if (!is_state_valid(world_, counter_, p_m)) {
            ++result_.stats.sampler_calls;
            const double sigma = config_.sigma_fraction * distance(p_s, p_g);
            p_f = gaussian_free_state_sampler(rng_, world_, counter_, p_m, sigma, config_.max_sampler_iters);
        } else {
            p_f = p_m;
        }
        return run(p_s, p_f, depth + 1) && run(p_f, p_g, depth + 1);
    }

private:
    const World& world_;
    CollisionCounter& counter_;
    SeededRng& rng_;
    const RmpdConfig& config_;
    const SignedDistanceField* sdf_;
    double step_;
    PlanResult& result_;
    std::size_t midpoints_ = 0;
};

PlanResult plan_recursive(const World& world, CollisionCounter& counter, SeededRng& rng,
                          const SignedDistanceField* sdf, const RmpdConfig& config, const State& p_s,
                          const State& p_g) {
    config.validate();
    if (p_s.dim() != world.dim() || p_g.dim() != world.dim()) {
        throw std::invalid_argument("query dimension does not match the world");
    }
    PlanResult result;
    result.path.waypoints.push_back(p_s);
    Recursion recursion(world, counter, rng, config, sdf, result);
    if (recursion.run(p_s, p_g, 0)) {
        result.status = PlanStatus::success;
    } else {
        result.path.waypoints.clear();
    }
    return result;
}

}  // namespace

PlanResult plan_rmpd(const World& world, CollisionCounter& counter, SeededRng& rng, const RmpdConfig& config,
                     const State& p_s, const State& p_g) {
    return plan_recursive(world, counter, rng, nullptr, config, p_s, p_g);
}

PlanResult plan_crmpd(const World& world, CollisionCounter& counter, SeededRng& rng,
                      const SignedDistanceField& sdf, const RmpdConfig& config, const State& p_s,
                      const State& p_g) {
    if (sdf.dim() != world.dim()) throw std::invalid_argument("SDF dimension does not match the world");
    return plan_recursive(world, counter, rng, &sdf, config, p_s, p_g);
}

}  // namespace rmpd
