#include "rmpd/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "rmpd/point_set.hpp"

namespace rmpd {

void BaselineConfig::validate() const {
    if (!(goal_bias >= 0.0 && goal_bias < 1.0)) throw std::invalid_argument("goal_bias must be in [0, 1)");
    if (prm_k == 0) throw std::invalid_argument("prm_k must be positive");
    if (prm_samples == 0) throw std::invalid_argument("prm_samples must be positive");
    if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
    if (!(time_budget_s > 0.0)) throw std::invalid_argument("time_budget_s must be positive");
}

double BaselineConfig::resolved_step(const World& world) const noexcept {
    return step_size > 0.0 ? step_size : 10.0 * resolve_collision_step(world, collision_step);
}

double BaselineConfig::resolved_gamma(const World& world) const noexcept {
    if (rewire_gamma > 0.0) return rewire_gamma;
    const double d = static_cast<double>(world.dim());
    return 2.0 * std::pow(1.0 + 1.0 / d, 1.0 / d) * std::pow(world.bounds().volume(), 1.0 / d);
}

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
public:
    explicit Deadline(double seconds)
        : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}
    [[nodiscard]] bool expired() const { return Clock::now() >= end_; }

private:
    Clock::time_point end_;
};

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

// Point at most `step` from `from` toward `to`.
State steer(const State& from, const State& to, double step) {
    const double d = distance(from, to);
    if (d <= step) return to;
    return interpolate(from, to, step / d);
}

struct Tree {
    explicit Tree(std::size_t dim) : points(dim) {}

    std::size_t add(const State& p, std::size_t parent) {
        parents.push_back(parent);
        return points.push(p);
    }

    // Root-first chain ending at node.
    [[nodiscard]] std::vector<State> chain_to(std::size_t node) const {
        std::vector<State> out;
        for (std::size_t n = node; n != kNoParent; n = parents[n]) out.push_back(points.at(n));
        std::reverse(out.begin(), out.end());
        return out;
    }

    PointSet points;
    std::vector<std::size_t> parents;
};

bool endpoints_valid(const World& world, CollisionCounter& counter, const State& p_s, const State& p_g) {
    if (p_s.dim() != world.dim() || p_g.dim() != world.dim()) {
        throw std::invalid_argument("query dimension does not match the world");
    }
    return is_state_valid(world, counter, p_s) && is_state_valid(world, counter, p_g);
}

State biased_sample(SeededRng& rng, const World& world, double goal_bias, const State& p_g) {
    if (goal_bias > 0.0 && rng.uniform01() < goal_bias) return p_g;
    return uniform_sample(rng, world.bounds());
}

}  // namespace

PlanResult plan_rrt(const World& world, CollisionCounter& counter, SeededRng& rng, const BaselineConfig& config,
                    const State& p_s, const State& p_g) {
    config.validate();
    PlanResult result;
    if (!endpoints_valid(world, counter, p_s, p_g)) {
        result.status = PlanStatus::invalid_endpoint;
        return result;
    }
    const double step = config.resolved_step(world);
    const double check_step = resolve_collision_step(world, config.collision_step);
    const Deadline deadline(config.time_budget_s);

    Tree tree(world.dim());
    tree.add(p_s, kNoParent);
    auto try_goal = [&](std::size_t node) {
        const State q = tree.points.at(node);
        if (distance(q, p_g) > step) return false;
        ++result.stats.segment_checks;
        if (!is_segment_valid(world, counter, q, p_g, check_step)) return false;
        result.path.waypoints = tree.chain_to(node);
        if (!(result.path.back() == p_g)) result.path.waypoints.push_back(p_g);
        result.status = PlanStatus::success;
        return true;
    };
    if (try_goal(0)) return result;

    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        if (deadline.expired()) {
            result.status = PlanStatus::time_budget_exhausted;
            return result;
        }
        ++result.stats.iterations;
        const State sample = biased_sample(rng, world, config.goal_bias, p_g);
        const std::size_t near = tree.points.nearest(sample);
        const State from = tree.points.at(near);
        const State to = steer(from, sample, step);
        if (to == from) continue;
        ++result.stats.segment_checks;
        if (!is_segment_valid(world, counter, from, to, check_step)) continue;
        const std::size_t node = tree.add(to, near);
        if (try_goal(node)) return result;
    }
    result.status = PlanStatus::budget_exhausted;
    return result;
}

PlanResult plan_rrt_connect(const World& world, CollisionCounter& counter, SeededRng& rng,
                            const BaselineConfig& config, const State& p_s, const State& p_g) {
    config.validate();
    PlanResult result;
    if (!endpoints_valid(world, counter, p_s, p_g)) {
        result.status = PlanStatus::invalid_endpoint;
        return result;
    }
    const double step = config.resolved_step(world);
    const double check_step = resolve_collision_step(world, config.collision_step);
    const Deadline deadline(config.time_budget_s);

    enum class Extend { trapped, advanced, reached };
    struct Grown {
        Extend outcome;
        std::size_t node;
    };
    auto extend = [&](Tree& tree, const State& target) -> Grown {
        const std::size_t near = tree.points.nearest(target);
        const State from = tree.points.at(near);
        if (from == target) return {Extend::reached, near};
        const State to = steer(from, target, step);
        ++result.stats.segment_checks;
        if (!is_segment_valid(world, counter, from, to, check_step)) return {Extend::trapped, near};
        const std::size_t node = tree.add(to, near);
        return {to == target ? Extend::reached : Extend::advanced, node};
    };

    Tree start_tree(world.dim());
    Tree goal_tree(world.dim());
    start_tree.add(p_s, kNoParent);
    goal_tree.add(p_g, kNoParent);
    Tree* a = &start_tree;
    Tree* b = &goal_tree;

    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        if (deadline.expired()) {
            result.status = PlanStatus::time_budget_exhausted;
            return result;
        }
        ++result.stats.iterations;
        const State sample = uniform_sample(rng, world.bounds());
        const Grown grown = extend(*a, sample);
        if (grown.outcome != Extend::trapped) {
            const State target = a->points.at(grown.node);
            Grown link{Extend::advanced, 0};
            while (link.outcome == Extend::advanced) link = extend(*b, target);
            if (link.outcome == Extend::reached) {
                std::vector<State> head = a->chain_to(grown.node);
                std::vector<State> tail = b->chain_to(link.node);
                if (a != &start_tree) std::swap(head, tail);
                // head runs start -> junction, tail runs goal -> junction.
                result.path.waypoints = std::move(head);
                for (auto itr = tail.rbegin(); itr != tail.rend(); ++itr) {
                    if (!(*itr == result.path.back())) result.path.waypoints.push_back(*itr);
                }
                result.status = PlanStatus::success;
                return result;
            }
        }
        std::swap(a, b);
    }
    result.status = PlanStatus::budget_exhausted;
    return result;
}

PlanResult plan_rrt_star(const World& world, CollisionCounter& counter, SeededRng& rng,
                         const BaselineConfig& config, const State& p_s, const State& p_g, RrtStarTrace* trace) {
    config.validate();
    PlanResult result;
    if (!endpoints_valid(world, counter, p_s, p_g)) {
        result.status = PlanStatus::invalid_endpoint;
        return result;
    }
    const double step = config.resolved_step(world);
    const double check_step = resolve_collision_step(world, config.collision_step);
    const double gamma = config.resolved_gamma(world);
    const double dim = static_cast<double>(world.dim());
    const Deadline deadline(config.time_budget_s);

    Tree tree(world.dim());
    std::vector<double> cost;
    std::vector<std::vector<std::size_t>> children;
    std::vector<std::size_t> goal_links;  // nodes with a validated segment to the goal
    tree.add(p_s, kNoParent);
    cost.push_back(0.0);
    children.emplace_back();

    auto segment_ok = [&](const State& a, const State& b) {
        ++result.stats.segment_checks;
        return is_segment_valid(world, counter, a, b, check_step);
    };
    auto consider_goal = [&](std::size_t node, const State& q) {
        if (distance(q, p_g) <= step && segment_ok(q, p_g)) goal_links.push_back(node);
    };
    auto best_goal = [&]() {
        std::size_t best = kNoParent;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t node : goal_links) {
            const double c = cost[node] + distance(tree.points.at(node), p_g);
            if (c < best_cost) {
                best_cost = c;
                best = node;
            }
        }
        return std::pair{best, best_cost};
    };
    // Re-derives subtree costs after a rewire; rounding is monotone so costs never grow.
    std::function<void(std::size_t)> propagate = [&](std::size_t node) {
        const State q = tree.points.at(node);
        for (std::size_t child : children[node]) {
            const double updated = cost[node] + distance(q, tree.points.at(child));
            if (trace != nullptr) trace->max_cost_increase = std::max(trace->max_cost_increase, updated - cost[child]);
            cost[child] = updated;
            propagate(child);
        }
    };

    consider_goal(0, p_s);
    PlanStatus exit_status = PlanStatus::budget_exhausted;
    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        if (deadline.expired()) {
            exit_status = PlanStatus::time_budget_exhausted;
            break;
        }
        ++result.stats.iterations;
        const State sample = biased_sample(rng, world, config.goal_bias, p_g);
        const std::size_t nearest = tree.points.nearest(sample);
        const State from = tree.points.at(nearest);
        const State q_new = steer(from, sample, step);
        if (q_new == from || !segment_ok(from, q_new)) continue;

        const double n = static_cast<double>(tree.points.size() + 1);
        const double radius = std::min(gamma * std::pow(std::log(n) / n, 1.0 / dim), 4.0 * step);
        std::vector<std::size_t> near = tree.points.within(q_new, radius);
        std::vector<double> near_dist(near.size());
        for (std::size_t i = 0; i < near.size(); ++i) near_dist[i] = distance(tree.points.at(near[i]), q_new);

        std::size_t parent = nearest;
        double parent_cost = cost[nearest] + distance(from, q_new);
        for (std::size_t i = 0; i < near.size(); ++i) {
            if (near[i] == nearest) continue;
            const double c = cost[near[i]] + near_dist[i];
            if (c < parent_cost && segment_ok(tree.points.at(near[i]), q_new)) {
                parent = near[i];
                parent_cost = c;
            }
        }
        const std::size_t node = tree.add(q_new, parent);
        cost.push_back(parent_cost);
        children.emplace_back();
        children[parent].push_back(node);

        for (std::size_t i = 0; i < near.size(); ++i) {
            const std::size_t other = near[i];
            if (other == parent) continue;
            const double c = parent_cost + near_dist[i];
            if (c < cost[other] && segment_ok(q_new, tree.points.at(other))) {
                auto& siblings = children[tree.parents[other]];
                siblings.erase(std::find(siblings.begin(), siblings.end(), other));
                tree.parents[other] = node;
                children[node].push_back(other);
                if (trace != nullptr) {
                    trace->max_cost_increase = std::max(trace->max_cost_increase, c - cost[other]);
                    ++trace->rewires;
                }
                cost[other] = c;
                propagate(other);
            }
        }
        consider_goal(node, q_new);
        if (trace != nullptr && !goal_links.empty()) trace->best_history.push_back(best_goal().second);
    }

    if (trace != nullptr) {
        for (std::size_t node = 1; node < tree.points.size(); ++node) {
            const double expected = cost[tree.parents[node]] +
                                    distance(tree.points.at(tree.parents[node]), tree.points.at(node));
            if (std::abs(expected - cost[node]) > 1e-9 * (1.0 + expected)) trace->tree_consistent = false;
        }
    }

    const auto [best, best_cost] = best_goal();
    if (best == kNoParent) {
        result.status = exit_status;
        return result;
    }
    result.path.waypoints = tree.chain_to(best);
    if (!(result.path.back() == p_g)) result.path.waypoints.push_back(p_g);
    result.status = PlanStatus::success;
    return result;
}

std::optional<std::vector<std::size_t>> roadmap_shortest_path(const Roadmap& roadmap, std::size_t from,
                                                              std::size_t to) {
    const std::size_t n = roadmap.vertices.size();
    if (from >= n || to >= n) throw std::out_of_range("roadmap vertex index");
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev(n, kNoParent);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    dist[from] = 0.0;
    open.emplace(0.0, from);
    while (!open.empty()) {
        const auto [d, u] = open.top();
        open.pop();
        if (d > dist[u]) continue;
        if (u == to) break;
        for (const auto& [v, w] : roadmap.adjacency[u]) {
            const double nd = d + w;
            if (nd < dist[v] || (nd == dist[v] && u < prev[v])) {
                dist[v] = nd;
                prev[v] = u;
                open.emplace(nd, v);
            }
        }
    }
    if (dist[to] == std::numeric_limits<double>::infinity()) return std::nullopt;
    std::vector<std::size_t> route;
    for (std::size_t v = to; v != kNoParent; v = prev[v]) route.push_back(v);
    std::reverse(route.begin(), route.end());
    return route;
}

PlanResult plan_prm(const World& world, CollisionCounter& counter, SeededRng& rng, const BaselineConfig& config,
                    const State& p_s, const State& p_g, Roadmap* roadmap_out) {
    config.validate();
    PlanResult result;
    if (!endpoints_valid(world, counter, p_s, p_g)) {
        result.status = PlanStatus::invalid_endpoint;
        return result;
    }
    const double check_step = resolve_collision_step(world, config.collision_step);
    const Deadline deadline(config.time_budget_s);

    Roadmap roadmap;
    PointSet points(world.dim());
    for (std::size_t attempt = 0; attempt < config.max_iterations && points.size() < config.prm_samples; ++attempt) {
        if (deadline.expired()) {
            result.status = PlanStatus::time_budget_exhausted;
            return result;
        }
        ++result.stats.iterations;
        State q = uniform_sample(rng, world.bounds());
        if (!is_state_valid(world, counter, q)) continue;
        points.push(q);
        roadmap.vertices.push_back(std::move(q));
    }
    roadmap.start_index = points.push(p_s);
    roadmap.vertices.push_back(p_s);
    roadmap.goal_index = points.push(p_g);
    roadmap.vertices.push_back(p_g);
    roadmap.adjacency.resize(roadmap.vertices.size());

    const std::size_t n = roadmap.vertices.size();
    std::unordered_set<std::uint64_t> tried;
    for (std::size_t i = 0; i < n; ++i) {
        if (deadline.expired()) {
            result.status = PlanStatus::time_budget_exhausted;
            return result;
        }
        for (std::size_t j : points.k_nearest(roadmap.vertices[i], config.prm_k, i)) {
            const std::uint64_t key = static_cast<std::uint64_t>(std::min(i, j)) * n + std::max(i, j);
            if (!tried.insert(key).second) continue;
            ++result.stats.segment_checks;
            if (!is_segment_valid(world, counter, roadmap.vertices[i], roadmap.vertices[j], check_step)) continue;
            const double w = distance(roadmap.vertices[i], roadmap.vertices[j]);
            roadmap.adjacency[i].emplace_back(j, w);
            roadmap.adjacency[j].emplace_back(i, w);
        }
    }

    const auto route = roadmap_shortest_path(roadmap, roadmap.start_index, roadmap.goal_index);
    if (route) {
        for (std::size_t v : *route) result.path.waypoints.push_back(roadmap.vertices[v]);
        result.status = PlanStatus::success;
    } else {
        result.status = PlanStatus::no_path_in_roadmap;
    }
    if (roadmap_out != nullptr) *roadmap_out = std::move(roadmap);
    return result;
}

}  // namespace rmpd
