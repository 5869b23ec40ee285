#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rmpd/space.hpp"
#include "support.hpp"

using namespace rmpd;

TEST(State, RejectsNonFinite) {
    EXPECT_THROW(State({1.0, std::nan("")}), std::invalid_argument);
    EXPECT_THROW(State({HUGE_VAL}), std::invalid_argument);
    EXPECT_NO_THROW(State({0.0, -3.5}));
}

TEST(State, Arithmetic) {
    State a{1, 2, 3};
    State b{4, 6, 3};
    EXPECT_EQ(a + b, (State{5, 8, 6}));
    EXPECT_EQ(b - a, (State{3, 4, 0}));
    EXPECT_EQ(a * 2.0, (State{2, 4, 6}));
    EXPECT_THROW((a += State{1, 2}), std::invalid_argument);
}

TEST(Distance, Examples) {
    EXPECT_EQ(distance(State{0, 0}, State{0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(distance(State{0, 0}, State{3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(distance(State{1, 2, 3}, State{4, 6, 3}), 5.0);
    EXPECT_THROW((void)distance(State{0, 0}, State{0, 0, 0}), std::invalid_argument);
}

TEST(Distance, MetricProperties) {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 500; ++i) {
        const std::size_t dim = 1 + i % 6;
        const State a = fixtures::random_state(gen, dim);
        const State b = fixtures::random_state(gen, dim);
        const State c = fixtures::random_state(gen, dim);
        EXPECT_EQ(distance(a, b), distance(b, a));
        EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-12);
        EXPECT_GT(distance(a, b), 0.0);
    }
}

TEST(Interpolate, Examples) {
    EXPECT_EQ(interpolate(State{0, 0}, State{2, 2}, 0.5), (State{1, 1}));
    EXPECT_EQ(interpolate(State{5, 7}, State{5, 7}, 0.3), (State{5, 7}));
    EXPECT_EQ(interpolate(State{0, 0, 0}, State{4, 8, 12}, 0.25), (State{1, 2, 3}));
}

TEST(Interpolate, RejectsOutOfRangeT) {
    EXPECT_THROW((void)interpolate(State{0}, State{1}, -0.01), std::invalid_argument);
    EXPECT_THROW((void)interpolate(State{0}, State{1}, 1.01), std::invalid_argument);
    EXPECT_THROW((void)interpolate(State{0}, State{1}, std::nan("")), std::invalid_argument);
}

TEST(Interpolate, EndpointsExactAndDistanceLinear) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const std::size_t dim = 1 + i % 5;
        const State a = fixtures::random_state(gen, dim, -100, 100);
        const State b = fixtures::random_state(gen, dim, -100, 100);
        EXPECT_EQ(interpolate(a, b, 0.0), a);
        EXPECT_EQ(interpolate(a, b, 1.0), b);
        const double t = u(gen);
        const double d = distance(a, b);
        EXPECT_NEAR(distance(interpolate(a, b, t), a), t * d, 1e-9 * d);
    }
}

TEST(SpaceBounds, Validation) {
    EXPECT_THROW(SpaceBounds(State{0, 0}, State{0, 0}), std::invalid_argument);
    EXPECT_THROW(SpaceBounds(State{0, 1}, State{1, 1}), std::invalid_argument);
    EXPECT_THROW(SpaceBounds(State{0}, State{1, 1}), std::invalid_argument);
    EXPECT_THROW(SpaceBounds(State(std::size_t{0}), State(std::size_t{0})), std::invalid_argument);
    const SpaceBounds b(State{0, 0}, State{3, 4});
    EXPECT_DOUBLE_EQ(b.diagonal(), 5.0);
    EXPECT_DOUBLE_EQ(b.volume(), 12.0);
    EXPECT_TRUE(b.contains(State{3, 4}.coords()));
    EXPECT_FALSE(b.contains(State{3.0001, 0}.coords()));
    EXPECT_DOUBLE_EQ(b.distance_outside(State{6, 8}.coords()), 5.0);
}

TEST(GaussianSample, ZeroSigmaIsIdentity) {
    SeededRng rng(1);
    const SpaceBounds b(State{0, 0}, State{2, 2});
    EXPECT_EQ(gaussian_sample(rng, State{1, 1}, 0.0, b), (State{1, 1}));
    EXPECT_THROW((void)gaussian_sample(rng, State{1, 1}, -1.0, b), std::invalid_argument);
}

TEST(GaussianSample, ClampedAtCorner) {
    SeededRng rng(2);
    const SpaceBounds b(State{0, 0}, State{1, 1});
    for (int i = 0; i < 1000; ++i) {
        const State s = gaussian_sample(rng, State{0, 1}, 1.0, b);
        EXPECT_TRUE(b.contains(s.coords()));
    }
}

TEST(GaussianSample, EmpiricalMean) {
    SeededRng rng(3);
    const SpaceBounds b(State{0, 0}, State{1, 1});
    double sx = 0.0;
    double sy = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const State s = gaussian_sample(rng, State{0.5, 0.5}, 0.1, b);
        sx += s[0];
        sy += s[1];
    }
    EXPECT_NEAR(sx / n, 0.5, 0.01);
    EXPECT_NEAR(sy / n, 0.5, 0.01);
}

TEST(GaussianSample, IntoMatchesByValue) {
    SeededRng r1(9);
    SeededRng r2(9);
    const SpaceBounds b(State(4, -1.0), State(4, 1.0));
    State out;
    for (int i = 0; i < 100; ++i) {
        gaussian_sample_into(r1, State(4, 0.2), 0.7, b, out);
        EXPECT_EQ(out, gaussian_sample(r2, State(4, 0.2), 0.7, b));
    }
}

TEST(StandardNormal, Moments) {
    SeededRng rng(4);
    double s1 = 0.0;
    double s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.standard_normal();
        s1 += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(UniformSample, WithinBoundsAndBalanced) {
    SeededRng rng(6);
    const SpaceBounds b(State{0, 0}, State{1, 1});
    int left = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const State s = uniform_sample(rng, b);
        ASSERT_TRUE(b.contains(s.coords()));
        left += s[0] <= 0.5;
    }
    EXPECT_NEAR(static_cast<double>(left) / n, 0.5, 0.02);
}

TEST(SeededRng, EqualSeedsEqualStreams) {
    SeededRng a(42);
    SeededRng b(42);
    SeededRng c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.standard_normal();
        ASSERT_EQ(x, b.standard_normal());
        ASSERT_EQ(a.uniform01(), b.uniform01());
        ASSERT_EQ(a.uniform_index(17), b.uniform_index(17));
        differs |= x != c.standard_normal();
    }
    EXPECT_TRUE(differs);
}

TEST(SeededRng, DocumentedStream) {
    // mt19937_64 with the default seed 5489 has its 10000th output fixed by the standard.
    SeededRng rng(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = rng.next_u64();
    EXPECT_EQ(x, 9981545732273789042ULL);
    SeededRng r2(7);
    std::mt19937_64 ref(7);
    EXPECT_EQ(r2.uniform01(), static_cast<double>(ref() >> 11) * 0x1.0p-53);
}

TEST(SeededRng, UniformIndexRange) {
    SeededRng rng(8);
    EXPECT_THROW((void)rng.uniform_index(0), std::invalid_argument);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.uniform_index(3), 3u);
}

TEST(MixSeed, SplitMixReference) {
    // First output of SplitMix64 seeded with 0.
    EXPECT_EQ(mix_seed(0), 0xe220a8397b1dcdafULL);
    EXPECT_NE(mix_seed(1), mix_seed(2));
}
