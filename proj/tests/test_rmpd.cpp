#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rmpd/rmpd.hpp"
#include "rmpd/sdf.hpp"
#include "support.hpp"

using namespace rmpd;

namespace {

// 20x20 world with a centered 4x4 box across the straight line from (2,10) to (18,10).
GeometricWorld centered_box_world() {
    return fixtures::box_world(State{0, 0}, State{20, 20}, State{8, 8}, State{12, 12});
}

// Vertical wall at x in [9, 11] with a gap y in [9, 11].
GeometricWorld wall_gap_world() {
    return GeometricWorld(SpaceBounds(State{0, 0}, State{20, 20}),
                          {BoxObstacle{State{9, 0}, State{11, 9}}, BoxObstacle{State{9, 11}, State{11, 20}}});
}

// Barycentric test for hull membership in 2-D via a tiny LP-free check: the point must lie on
// the inner side of every hull edge. Hull computed with Andrew's monotone chain.
std::vector<State> hull_2d(std::vector<State> pts) {
    std::sort(pts.begin(), pts.end(), [](const State& a, const State& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    auto cross = [](const State& o, const State& a, const State& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<State> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

bool inside_hull(const std::vector<State>& hull, const State& p, double tol) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const State& a = hull[i];
        const State& b = hull[(i + 1) % hull.size()];
        const double c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if (c < -tol) return false;
    }
    return true;
}

}  // namespace

TEST(SmoothnessCost, Examples) {
    EXPECT_NEAR(smoothness_cost(State{0, 0}, State{1, 0}, State{2, 0}), 0.0, 1e-12);
    EXPECT_NEAR(smoothness_cost(State{0, 0}, State{1, 1}, State{2, 0}), 2.0 * std::sqrt(2.0) - 2.0, 1e-12);
    EXPECT_NEAR(smoothness_cost(State{0, 0}, State{1, 2}, State{2, 0}), 2.0 * std::sqrt(5.0) - 2.0, 1e-12);
    EXPECT_NEAR(smoothness_cost(State{0, 0}, State{1, 2}, State{2, 0}), 2.4721, 1e-4);
    EXPECT_NEAR(smoothness_cost(State{0, 0}, State{0.5, 1}, State{1, 0}), 1.2361, 1e-4);
}

TEST(SmoothnessCost, NonNegativeAndZeroOnChord) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const State a = fixtures::random_state(gen, 3);
        const State b = fixtures::random_state(gen, 3);
        const State p = fixtures::random_state(gen, 3);
        EXPECT_GE(smoothness_cost(a, p, b), 0.0);
        EXPECT_NEAR(smoothness_cost(a, interpolate(a, b, u(gen)), b), 0.0, 1e-9);
    }
}

TEST(StateCost, Composition) {
    const GeometricWorld w = centered_box_world();
    const SignedDistanceField sdf = build_sdf(w, 0.5);
    RmpdConfig cfg;
    const State s{2, 2};
    const State g{18, 2};
    const CostTerms free = state_cost(sdf, cfg, s, State{10, 2}, g);
    EXPECT_LT(free.total, 0.0);
    EXPECT_NEAR(free.smoothness, 0.0, 1e-12);
    const CostTerms hit = state_cost(sdf, cfg, s, State{10, 10}, g);
    EXPECT_GT(hit.clearance, 0.0);
    EXPECT_DOUBLE_EQ(hit.total, hit.clearance + 0.5 * hit.smoothness);
    cfg.lambda = 0.0;
    const CostTerms bare = state_cost(sdf, cfg, s, State{10, 10}, g);
    EXPECT_EQ(bare.total, bare.clearance);
}

TEST(Softmax, ClosedForm) {
    const std::vector<double> c{0.0, 1.0};
    const auto w = softmax_weights(c, 5.0);
    const double e = std::exp(-5.0);
    EXPECT_NEAR(w[0], 1.0 / (1.0 + e), 1e-15);
    EXPECT_NEAR(w[1], e / (1.0 + e), 1e-15);
    EXPECT_NEAR(w[0], 0.99331, 1e-5);
    EXPECT_NEAR(w[1], 0.00669, 1e-5);
}

TEST(Softmax, EqualCostsAreUniform) {
    const std::vector<double> c(10, 3.7);
    for (double w : softmax_weights(c, 5.0)) EXPECT_DOUBLE_EQ(w, 0.1);
}

TEST(Softmax, SumsToOneAndShiftInvariant) {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::uniform_int_distribution<int> n(1, 40);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> c(n(gen));
        for (double& x : c) x = u(gen);
        const auto w = softmax_weights(c, 5.0);
        double sum = 0.0;
        for (double x : w) {
            EXPECT_GT(x, 0.0 - 1e-300);
            EXPECT_LE(x, 1.0);
            sum += x;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        const double shift = u(gen);
        std::vector<double> shifted = c;
        for (double& x : shifted) x += shift;
        const auto w2 = softmax_weights(shifted, 5.0);
        for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], w2[i], 1e-9);
    }
}

TEST(WeightedUpdate, StaysInConvexHull) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int t = 0; t < 1000; ++t) {
        const State p_m{u(gen), u(gen)};
        std::vector<State> samples;
        std::vector<double> costs;
        for (int i = 0; i < 10; ++i) {
            samples.push_back(State{u(gen), u(gen)});
            costs.push_back(u(gen) / 10.0);
        }
        const auto w = softmax_weights(costs, 5.0);
        const State out = weighted_update(p_m, samples, w);
        std::vector<State> pts = samples;
        pts.push_back(p_m);
        EXPECT_TRUE(inside_hull(hull_2d(pts), out, 1e-9)) << "instance " << t;
    }
}

TEST(WeightedUpdate, SingleSampleLandsOnIt) {
    const State p_m{1, 2, 3};
    const std::vector<State> s{State{4, -1, 0.5}};
    const std::vector<double> w{1.0};
    const State out = weighted_update(p_m, s, w);
    for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(out[d], s[0][d], 1e-12);
}

TEST(WeightedUpdate, EqualWeightsGiveMean) {
    const State p_m{0, 0};
    const std::vector<State> s{State{1, 0}, State{0, 1}, State{2, 2}};
    const std::vector<double> w(3, 1.0 / 3.0);
    const State out = weighted_update(p_m, s, w);
    EXPECT_NEAR(out[0], 1.0, 1e-12);
    EXPECT_NEAR(out[1], 1.0, 1e-12);
}

TEST(GreedyRule, ArgminUnchangedByScaling) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> c(10);
        for (double& x : c) x = u(gen);
        const double s = scale(gen);
        std::vector<double> cs = c;
        for (double& x : cs) x *= s;
        EXPECT_EQ(std::min_element(c.begin(), c.end()) - c.begin(), std::min_element(cs.begin(), cs.end()) - cs.begin());
        // The softmax argmax agrees with the cost argmin.
        const auto w = softmax_weights(c, 5.0);
        EXPECT_EQ(std::max_element(w.begin(), w.end()) - w.begin(), std::min_element(c.begin(), c.end()) - c.begin());
    }
}

TEST(GaussianFreeSampler, EmptyWorldFirstSampleFree) {
    const GeometricWorld w = fixtures::empty_world(2);
    SeededRng rng(1);
    CollisionCounter c;
    const State out = gaussian_free_state_sampler(rng, w, c, State{5, 5}, 0.5, 20);
    EXPECT_EQ(c.count(), 1u);
    EXPECT_FALSE(w.in_collision(out.coords()));
}

TEST(GaussianFreeSampler, FailureReturnsLastCandidate) {
    const GeometricWorld w = fixtures::box_world(State{0, 0}, State{10, 10}, State{2, 2}, State{8, 8});
    SeededRng rng(2);
    CollisionCounter c(true);
    const State out = gaussian_free_state_sampler(rng, w, c, State{5, 5}, 0.01, 5);
    EXPECT_TRUE(w.in_collision(out.coords()));
    EXPECT_EQ(c.count(), 5u);
    EXPECT_EQ(out, c.log().back());
}

TEST(GaussianFreeSampler, EdgeOfObstacleMostlySucceeds) {
    // Mid-point just inside the wall face; passage width 2 used as sigma.
    const GeometricWorld w = wall_gap_world();
    int free = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SeededRng rng(seed);
        CollisionCounter c;
        const State out = gaussian_free_state_sampler(rng, w, c, State{9.05, 5}, 2.0, 20);
        free += !w.in_collision(out.coords());
    }
    EXPECT_GE(free, 95);
}

TEST(CostAwareSampler, TraceRespectsTerminationRule) {
    const GeometricWorld w = wall_gap_world();
    const SignedDistanceField sdf = build_sdf(w, 0.5);
    for (MidpointRule rule : {MidpointRule::weighted_average, MidpointRule::greedy_min_cost}) {
        RmpdConfig cfg;
        cfg.midpoint_rule = rule;
        cfg.max_egd_iters = 7;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            SeededRng rng(seed);
            CostAwareTrace trace;
            (void)cost_aware_free_state_sampler(rng, w, sdf, cfg, State{3, 5}, State{10, 5}, State{17, 5}, &trace);
            ASSERT_EQ(trace.costs.size(), trace.iterations);
            ASSERT_GE(trace.iterations, 1u);
            ASSERT_LE(trace.iterations, cfg.max_egd_iters);
            for (std::size_t i = 1; i + 1 < trace.costs.size(); ++i) {
                const double prev = trace.costs[i - 1];
                EXPECT_GT(prev - trace.costs[i], cfg.epsilon * (1.0 + std::abs(prev)));
            }
            if (trace.converged) {
                ASSERT_GE(trace.costs.size(), 2u);
                const double prev = trace.costs[trace.costs.size() - 2];
                EXPECT_LE(prev - trace.costs.back(), cfg.epsilon * (1.0 + std::abs(prev)));
            } else {
                EXPECT_EQ(trace.iterations, cfg.max_egd_iters);
            }
        }
    }
}

TEST(CostAwareSampler, AtMinimumConvergesAfterSecondPass) {
    // A generous epsilon stops the loop at the first comparison.
    const GeometricWorld w = fixtures::empty_world(2, 20);
    const SignedDistanceField sdf = build_sdf(w, 0.5);
    RmpdConfig cfg;
    cfg.epsilon = 1e6;
    SeededRng rng(5);
    CostAwareTrace trace;
    const State out = cost_aware_free_state_sampler(rng, w, sdf, cfg, State{5, 10}, State{10, 10}, State{15, 10}, &trace);
    EXPECT_TRUE(trace.converged);
    EXPECT_EQ(trace.iterations, 2u);
    EXPECT_FALSE(w.in_collision(out.coords()));
}

TEST(CostAwareSampler, MovesOutOfObstacleAndNeverChecksCollision) {
    const GeometricWorld w = centered_box_world();
    const SignedDistanceField sdf = build_sdf(w, 0.25);
    RmpdConfig cfg;
    int freed = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SeededRng rng(seed);
        const State out = cost_aware_free_state_sampler(rng, w, sdf, cfg, State{2, 10}, State{10, 10}, State{18, 10});
        freed += !w.in_collision(out.coords());
    }
    EXPECT_GE(freed, 25);
}

TEST(CostAwareSampler, DeterministicPerSeed) {
    const GeometricWorld w = wall_gap_world();
    const SignedDistanceField sdf = build_sdf(w, 0.5);
    RmpdConfig cfg;
    for (SeedRule seed_rule : {SeedRule::naive_midpoint, SeedRule::greedy_k_samples}) {
        cfg.seed_rule = seed_rule;
        SeededRng a(77);
        SeededRng b(77);
        EXPECT_EQ(cost_aware_free_state_sampler(a, w, sdf, cfg, State{3, 5}, State{10, 5}, State{17, 5}),
                  cost_aware_free_state_sampler(b, w, sdf, cfg, State{3, 5}, State{10, 5}, State{17, 5}));
    }
}

TEST(PlanRmpd, EmptyWorldBaseCase) {
    const GeometricWorld w = fixtures::empty_world(3);
    const SignedDistanceField sdf = build_sdf(w, 1.0);
    const State s{1, 1, 1};
    const State g{9, 8, 7};
    RmpdConfig cfg;
    SeededRng r1(1);
    CollisionCounter c1;
    const PlanResult a = plan_rmpd(w, c1, r1, cfg, s, g);
    SeededRng r2(1);
    CollisionCounter c2;
    const PlanResult b = plan_crmpd(w, c2, r2, sdf, cfg, s, g);
    for (const PlanResult* r : {&a, &b}) {
        ASSERT_TRUE(r->ok());
        EXPECT_EQ(r->path.waypoints, (std::vector<State>{s, g}));
        EXPECT_EQ(r->stats.segment_checks, 1u);
        EXPECT_EQ(r->stats.sampler_calls, 0u);
    }
    EXPECT_EQ(c1.count(), c2.count());
}

TEST(PlanRmpd, InvalidGoalTwoChecks) {
    const GeometricWorld w = centered_box_world();
    RmpdConfig cfg;
    SeededRng rng(1);
    CollisionCounter c;
    const PlanResult r = plan_rmpd(w, c, rng, cfg, State{2, 2}, State{10, 10});
    EXPECT_EQ(r.status, PlanStatus::invalid_endpoint);
    EXPECT_EQ(c.count(), 2u);
    EXPECT_TRUE(r.path.empty());
}

TEST(PlanRmpd, DetoursAroundCenteredBox) {
    const GeometricWorld w = centered_box_world();
    const SignedDistanceField sdf = build_sdf(w, 0.25);
    RmpdConfig cfg;
    int ok_rmpd = 0;
    int ok_crmpd = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        for (bool cost_aware : {false, true}) {
            SeededRng rng(seed);
            CollisionCounter c;
            const PlanResult r = cost_aware ? plan_crmpd(w, c, rng, sdf, cfg, State{2, 10}, State{18, 10})
                                            : plan_rmpd(w, c, rng, cfg, State{2, 10}, State{18, 10});
            if (!r.ok()) continue;
            (cost_aware ? ok_crmpd : ok_rmpd)++;
            EXPECT_GE(r.path.size(), 3u);
            EXPECT_LE(r.path.size(), cfg.n_max + 2);
            EXPECT_EQ(r.path.front(), (State{2, 10}));
            EXPECT_EQ(r.path.back(), (State{18, 10}));
            const double step = resolve_collision_step(w, cfg.collision_step);
            EXPECT_TRUE(fixtures::replay_valid(w, r.path, 0.5 * step));
        }
    }
    EXPECT_GT(ok_rmpd, 0);
    // The clearance reward keeps growing away from the box, so some seeds chase mid-points to the
    // map edge and spend the depth budget there; most still detour.
    EXPECT_GE(ok_crmpd, 20);
}

TEST(PlanRmpd, BudgetCapsWaypoints) {
    // A tiny budget on a hard query either fails cleanly or stays within n_max + 2 waypoints.
    const GeometricWorld w = wall_gap_world();
    RmpdConfig cfg;
    cfg.n_max = 3;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SeededRng rng(seed);
        CollisionCounter c;
        const PlanResult r = plan_rmpd(w, c, rng, cfg, State{2, 2}, State{18, 18});
        if (r.ok()) {
            EXPECT_LE(r.path.size(), cfg.n_max + 2);
        } else {
            EXPECT_TRUE(r.status == PlanStatus::budget_exhausted || r.status == PlanStatus::midpoint_in_collision);
        }
        EXPECT_LE(r.stats.sampler_calls, cfg.n_max);
    }
}

TEST(PlanRmpd, DeterministicPaths) {
    const GeometricWorld w = wall_gap_world();
    const SignedDistanceField sdf = build_sdf(w, 0.5);
    RmpdConfig cfg;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SeededRng a(seed);
        SeededRng b(seed);
        CollisionCounter ca;
        CollisionCounter cb;
        const PlanResult ra = plan_crmpd(w, ca, a, sdf, cfg, State{3, 5}, State{17, 5});
        const PlanResult rb = plan_crmpd(w, cb, b, sdf, cfg, State{3, 5}, State{17, 5});
        EXPECT_EQ(ra.status, rb.status);
        EXPECT_EQ(ra.path, rb.path);
        EXPECT_EQ(ca.count(), cb.count());
        SeededRng c(seed);
        SeededRng d(seed);
        CollisionCounter cc;
        CollisionCounter cd;
        EXPECT_EQ(plan_rmpd(w, cc, c, cfg, State{3, 5}, State{17, 5}).path,
                  plan_rmpd(w, cd, d, cfg, State{3, 5}, State{17, 5}).path);
    }
}

TEST(RmpdConfig, ValidationAndDepth) {
    RmpdConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.max_depth(), 7u + 8u);
    cfg.n_max = 1;
    EXPECT_EQ(cfg.max_depth(), 8u);
    cfg.n_max = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = RmpdConfig{};
    cfg.h = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = RmpdConfig{};
    cfg.k = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
