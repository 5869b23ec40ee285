#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rmpd/planner.hpp"
#include "rmpd/world.hpp"
#include "support.hpp"

using namespace rmpd;

namespace {

BitmapWorld single_cell_bitmap() {
    // 4x3 map, cell (1, 2) blocked (top row, second column).
    std::vector<bool> occ(12, false);
    occ[2 * 4 + 1] = true;
    return BitmapWorld(4, 3, occ);
}

}  // namespace

TEST(BitmapWorld, CellLookup) {
    const BitmapWorld w = single_cell_bitmap();
    EXPECT_TRUE(w.in_collision(State{1.5, 2.5}.coords()));
    EXPECT_TRUE(w.in_collision(State{1.0, 2.0}.coords()));
    EXPECT_FALSE(w.in_collision(State{0.99, 2.5}.coords()));
    EXPECT_FALSE(w.in_collision(State{1.5, 1.99}.coords()));
    EXPECT_EQ(w.occupied_count(), 1u);
    EXPECT_DOUBLE_EQ(w.default_collision_step(), 0.5);
}

TEST(BitmapWorld, RejectsBadOccupancySize) {
    EXPECT_THROW(BitmapWorld(3, 3, std::vector<bool>(8, false)), std::invalid_argument);
}

TEST(IsStateValid, CountsEachQueryOnce) {
    const BitmapWorld w = single_cell_bitmap();
    CollisionCounter c;
    EXPECT_TRUE(is_state_valid(w, c, State{0.5, 0.5}));
    EXPECT_FALSE(is_state_valid(w, c, State{1.5, 2.5}));
    EXPECT_FALSE(is_state_valid(w, c, State{-0.1, 0.5}));
    EXPECT_FALSE(is_state_valid(w, c, State{0.5, 3.01}));
    EXPECT_EQ(c.count(), 4u);
}

TEST(GeometricWorld, BoxesClosedSpheresInclusive) {
    const GeometricWorld w(SpaceBounds(State{0, 0, 0}, State{10, 10, 10}),
                           {BoxObstacle{State{1, 1, 1}, State{2, 2, 2}}, SphereObstacle{State{6, 6, 6}, 1.0}});
    EXPECT_TRUE(w.in_collision(State{2, 2, 2}.coords()));
    EXPECT_FALSE(w.in_collision(State{2.0001, 2, 2}.coords()));
    EXPECT_TRUE(w.in_collision(State{7, 6, 6}.coords()));
    EXPECT_FALSE(w.in_collision(State{7.0001, 6, 6}.coords()));
    EXPECT_FALSE(w.in_collision(State{5, 5, 5}.coords()));
}

TEST(GeometricWorld, RejectsMalformedObstacles) {
    const SpaceBounds b(State{0, 0}, State{1, 1});
    EXPECT_THROW(GeometricWorld(b, {BoxObstacle{State{0.5, 0.5}, State{0.4, 0.6}}}), std::invalid_argument);
    EXPECT_THROW(GeometricWorld(b, {SphereObstacle{State{0.5, 0.5}, -1.0}}), std::invalid_argument);
    EXPECT_THROW(GeometricWorld(b, {SphereObstacle{State{0.5, 0.5, 0.5}, 0.1}}), std::invalid_argument);
}

TEST(SegmentIntervals, SmallestEvenCount) {
    EXPECT_EQ(segment_intervals(0.0, 0.5), 0u);
    EXPECT_EQ(segment_intervals(1.0, 0.5), 2u);
    EXPECT_EQ(segment_intervals(1.2, 0.5), 4u);
    EXPECT_EQ(segment_intervals(0.1, 0.5), 2u);
    EXPECT_EQ(segment_intervals(2.0, 0.5), 4u);
    EXPECT_THROW((void)segment_intervals(1.0, 0.0), std::invalid_argument);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.01, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double len = u(gen);
        const double step = u(gen) / 10.0;
        const std::size_t n = segment_intervals(len, step);
        EXPECT_EQ(n % 2, 0u);
        EXPECT_LE(len / static_cast<double>(n), step);
        EXPECT_TRUE(n == 2 || len / static_cast<double>(n - 2) > step);
    }
}

TEST(MiddleOutOrder, AlternatesFromCenter) {
    EXPECT_EQ(middle_out_order(0), (std::vector<std::size_t>{0}));
    EXPECT_EQ(middle_out_order(2), (std::vector<std::size_t>{1, 0, 2}));
    EXPECT_EQ(middle_out_order(6), (std::vector<std::size_t>{3, 2, 4, 1, 5, 0, 6}));
}

TEST(IsSegmentValid, EmptyWorldChecksEveryPoint) {
    const GeometricWorld w = fixtures::empty_world(2);
    // ceil(d / step) is even for all of these.
    const std::vector<std::pair<State, State>> cases = {
        {State{0, 0}, State{3, 4}},      // d = 5, step 0.5 -> 10
        {State{1, 1}, State{1, 9}},      // d = 8 -> 16
        {State{2, 2}, State{2.9, 2}},    // d = 0.9 -> 2
        {State{0, 0}, State{7.2, 9.6}},  // d = 12 -> 24
    };
    for (const auto& [a, b] : cases) {
        CollisionCounter c;
        EXPECT_TRUE(is_segment_valid(w, c, a, b, 0.5));
        const double d = distance(a, b);
        EXPECT_EQ(c.count(), static_cast<std::uint64_t>(std::ceil(d / 0.5)) + 1);
    }
}

TEST(IsSegmentValid, DegenerateSegmentIsOneCheck) {
    const GeometricWorld w = fixtures::empty_world(3);
    CollisionCounter c;
    EXPECT_TRUE(is_segment_valid(w, c, State{1, 1, 1}, State{1, 1, 1}, 0.5));
    EXPECT_EQ(c.count(), 1u);
}

TEST(IsSegmentValid, BlockedMidpointFailsAfterOneCheck) {
    const GeometricWorld w = fixtures::box_world(State{0, 0}, State{10, 10}, State{4.5, 4.5}, State{5.5, 5.5});
    CollisionCounter c;
    EXPECT_FALSE(is_segment_valid(w, c, State{1, 5}, State{9, 5}, 0.1));
    EXPECT_EQ(c.count(), 1u);
}

TEST(IsSegmentValid, LogAlternatesAroundMidpoint) {
    // Obstacle near a: [1.0, 1.3] on x. Segment from x = 0.5 to 9.5, step 0.5.
    const GeometricWorld w = fixtures::box_world(State{0, 0}, State{10, 10}, State{1.0, 0}, State{1.3, 10});
    const State a{0.5, 5};
    const State b{9.5, 5};
    CollisionCounter c(true);
    EXPECT_FALSE(is_segment_valid(w, c, a, b, 0.5));
    const auto& log = c.log();
    ASSERT_GE(log.size(), 3u);
    EXPECT_EQ(log[0], (State{5, 5}));
    for (std::size_t k = 1; k < log.size(); ++k) {
        const double off = log[k][0] - 5.0;
        EXPECT_EQ(off < 0.0, k % 2 == 1) << "check " << k;
        const double expect = 0.5 * static_cast<double>((k + 1) / 2);
        EXPECT_NEAR(std::abs(off), expect, 1e-12);
    }
    EXPECT_NEAR(log.back()[0], 1.0, 1e-12);
    // A march from b would need 18 checks to reach x = 1.0; middle-out needs 16.
    EXPECT_LT(c.count(), 18u);
}

TEST(IsSegmentValid, CentralBlockageBeatsLinearMarch) {
    const GeometricWorld w = fixtures::box_world(State{0, 0}, State{10, 10}, State{4.8, 0}, State{5.2, 10});
    CollisionCounter c;
    EXPECT_FALSE(is_segment_valid(w, c, State{0.25, 5}, State{9.75, 5}, 0.25));
    EXPECT_EQ(c.count(), 1u);
}

TEST(IsSegmentValid, SymmetricUnderReversal) {
    std::mt19937_64 gen(3);
    const GeometricWorld w(SpaceBounds(State{0, 0, 0}, State{10, 10, 10}),
                           {SphereObstacle{State{5, 5, 5}, 2.0}, BoxObstacle{State{1, 1, 1}, State{3, 2, 9}}});
    for (int i = 0; i < 300; ++i) {
        const State a = fixtures::random_state(gen, 3, 0, 10);
        const State b = fixtures::random_state(gen, 3, 0, 10);
        CollisionCounter c1;
        CollisionCounter c2;
        EXPECT_EQ(is_segment_valid(w, c1, a, b, 0.2), is_segment_valid(w, c2, b, a, 0.2));
        const std::size_t n = segment_intervals(distance(a, b), 0.2);
        for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(segment_point(a, b, k, n), segment_point(b, a, n - k, n));
    }
}

TEST(IsSegmentValid, AgreesWithFineReplay) {
    // Whenever the local planner accepts a segment, a 4x finer march finds no collision with
    // obstacles that are thicker than the step.
    std::mt19937_64 gen(4);
    const GeometricWorld w(SpaceBounds(State{0, 0}, State{10, 10}),
                           {BoxObstacle{State{4, 0}, State{6, 7}}, SphereObstacle{State{2, 8}, 1.0}});
    int accepted = 0;
    for (int i = 0; i < 2000; ++i) {
        const State a = fixtures::random_state(gen, 2, 0, 10);
        const State b = fixtures::random_state(gen, 2, 0, 10);
        CollisionCounter c;
        if (is_segment_valid(w, c, a, b, 0.1)) {
            ++accepted;
            EXPECT_TRUE(fixtures::replay_valid(w, Path{{a, b}}, 0.025));
        }
    }
    EXPECT_GT(accepted, 100);
}

TEST(PathHelpers, LengthAndValidity) {
    EXPECT_DOUBLE_EQ(path_length(Path{{State{0, 0}, State{3, 4}}}), 5.0);
    EXPECT_DOUBLE_EQ(path_length(Path{{State{0, 0}, State{1, 0}, State{1, 1}}}), 2.0);
    const GeometricWorld w = fixtures::box_world(State{0, 0}, State{10, 10}, State{4, 4}, State{6, 6});
    CollisionCounter c;
    EXPECT_TRUE(path_is_valid(w, c, Path{{State{1, 1}, State{1, 9}, State{9, 9}}}, 0.1));
    EXPECT_FALSE(path_is_valid(w, c, Path{{State{1, 1}, State{9, 9}}}, 0.1));
    EXPECT_DOUBLE_EQ(resolve_collision_step(w, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(resolve_collision_step(w, 0.0), w.default_collision_step());
}
