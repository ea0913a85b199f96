#include <gtest/gtest.h>

#include <random>

#include "troproot/intersect.hpp"

using namespace troproot;

namespace {

TropLinearSpace line() { return trop_linear_space(RatMatrix{{1, 1, -1}}, true); }

IntMatrix antidiagonal() { return IntMatrix{{1, -1}}; }

// Running example block at a = 1 with b = L * (1, ..., 6).
RatMatrix running_block() {
    RatMatrix c{{0, 1, -1, 1}, {1, -2, 0, 0}, {0, 0, 1, -2}};
    RatMatrix l{{0, 0, 1, 1, 1, 1}, {1, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, 1}};
    RatVec b = mul(l, RatVec{1, 2, 3, 4, 5, 6});
    RatMatrix block(6, 11);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) block(i, j) = c(i, j);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 6; ++j) block(3 + i, 4 + j) = l(i, j);
        block(3 + i, 10) = -b[i];
    }
    return block;
}

IntMatrix running_wdir() {
    IntMatrix m{{1, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
    return hstack(m, IntMatrix::identity(6));
}

}  // namespace

TEST(Intersect, FigureTwoDiagonalShift) {
    auto t = line();
    for (const auto& shift : {RatVec{Rat(1), Rat(1)}, RatVec{Rat(1, 2), Rat(1, 2)}}) {
        auto r = intersect_at_shift(t, antidiagonal(), shift);
        ASSERT_TRUE(r);
        ASSERT_EQ(r->points.size(), 2u);
        Rat s = shift[0] + shift[1];
        EXPECT_EQ(r->points[0].point, (RatVec{Rat(0), s}));
        EXPECT_EQ(r->points[1].point, (RatVec{s, Rat(0)}));
        EXPECT_EQ(r->points[0].multiplicity, 1);
        EXPECT_EQ(r->points[1].multiplicity, 1);
        EXPECT_EQ(r->total_degree, 2);
        EXPECT_EQ(positive_point_count(*r), 2u);
    }
}

TEST(Intersect, FigureTwoNegativeShift) {
    auto r = intersect_at_shift(line(), antidiagonal(), {Rat(0), Rat(-1)});
    ASSERT_TRUE(r);
    ASSERT_EQ(r->points.size(), 1u);
    EXPECT_EQ(r->points[0].point, (RatVec{Rat(-1, 2), Rat(-1, 2)}));
    EXPECT_EQ(r->points[0].multiplicity, 2);
    EXPECT_EQ(r->total_degree, 2);
    EXPECT_EQ(positive_point_count(*r), 0u);
}

TEST(Intersect, ShiftThroughVertexIsRejected) {
    EXPECT_FALSE(intersect_at_shift(line(), antidiagonal(), {Rat(0), Rat(0)}));
}

TEST(Intersect, EmptySpace) {
    auto t = trop_linear_space(RatMatrix{{1, 0}}, false);
    std::mt19937_64 rng(1);
    auto r = stable_intersect(t, IntMatrix{{1, 1}}, {0, 1}, rng);
    EXPECT_EQ(r.total_degree, 0);
    EXPECT_EQ(r.retries_used, 0u);
    EXPECT_TRUE(r.transversal);
    EXPECT_EQ(positive_point_count(r), 0u);
}

TEST(Intersect, DegreeIndependentOfShift) {
    auto t = line();
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        std::mt19937_64 rng(seed);
        auto r = stable_intersect(t, antidiagonal(), {0, 1}, rng);
        EXPECT_EQ(r.total_degree, 2);
        EXPECT_LE(positive_point_count(r), 2u);
        for (const auto& p : r.points) EXPECT_TRUE(contains(t, p.point));
    }
}

TEST(Intersect, RunningExampleDegreeThree) {
    auto t = trop_linear_space(running_block(), true, {false, kDefaultFlagBudget});
    auto w = running_wdir();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        auto r = stable_intersect(t, w, {0, 1, 2, 3}, rng);
        EXPECT_EQ(r.total_degree, 3) << "seed " << seed;
        EXPECT_LE(positive_point_count(r), 3u);
        for (const auto& p : r.points) {
            EXPECT_TRUE(contains(t, p.point));
            // residual: p - shift lies in the row space of w
            RatVec diff(p.point.size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p.point[i] - r.shift_h[i];
            EXPECT_TRUE(solve_affine(to_rat(w).transpose(), diff));
        }
    }
}

TEST(Intersect, SearchAgreesWithExplicitCones) {
    auto t = trop_linear_space(running_block(), true);
    auto w = running_wdir();
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long> d(-1000, 1000);
    int compared = 0;
    for (int trial = 0; trial < 8; ++trial) {
        RatVec shift(10);
        for (std::size_t i = 0; i < 4; ++i) shift[i] = d(rng);
        auto a = intersect_at_shift(t, w, shift);
        auto b = intersect_at_shift_explicit(t, w, shift);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (!a) continue;
        ++compared;
        ASSERT_EQ(a->points.size(), b->points.size());
        for (std::size_t i = 0; i < a->points.size(); ++i) {
            EXPECT_EQ(a->points[i].point, b->points[i].point);
            EXPECT_EQ(a->points[i].multiplicity, b->points[i].multiplicity);
            EXPECT_EQ(a->points[i].positive, b->points[i].positive);
        }
    }
    EXPECT_GT(compared, 0);
}

void expect_same_points(const IntersectionReport& a, const IntersectionReport& b) {
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].point, b.points[i].point);
        EXPECT_EQ(a.points[i].multiplicity, b.points[i].multiplicity);
        EXPECT_EQ(a.points[i].positive, b.points[i].positive);
    }
    EXPECT_EQ(a.total_degree, b.total_degree);
}

TEST(Intersect, CircuitSearchAgreesWithFlagSearch) {
    auto t = trop_linear_space(running_block(), true);
    auto w = running_wdir();
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<long> d(-1000, 1000);
    int compared = 0;
    for (int trial = 0; trial < 8; ++trial) {
        RatVec shift(10);
        for (std::size_t i = 0; i < 4; ++i) shift[i] = d(rng);
        auto a = intersect_at_shift_circuits(t, w, shift);
        auto b = intersect_at_shift(t, w, shift);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (!a) continue;
        ++compared;
        expect_same_points(*a, *b);
    }
    EXPECT_GT(compared, 4);
}

TEST(Intersect, CircuitSearchAgreesOnRandomSpaces) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> entry(-3, 3), rows(1, 3), extra(2, 4), coin(0, 1);
    std::uniform_int_distribution<long> big(-500, 500);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t k = rows(rng), n = k + extra(rng);
        bool affine = coin(rng);
        RatMatrix a(k, n + (affine ? 1 : 0));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = entry(rng);
        if (rank(a) < k) continue;
        auto t = trop_linear_space(a, affine);
        if (t.is_empty) continue;
        std::size_t fan_dim = t.matroid->rank() - (affine ? 1 : 0);
        if (fan_dim >= n) continue;
        IntMatrix w(n - fan_dim, n);
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) w(i, j) = entry(rng);
        if (rank(w) < w.rows()) continue;
        RatVec shift(n);
        for (auto& x : shift) x = big(rng);
        auto c = intersect_at_shift_circuits(t, w, shift);
        auto f = intersect_at_shift(t, w, shift);
        auto e = intersect_at_shift_explicit(t, w, shift);
        ASSERT_EQ(c.has_value(), f.has_value()) << "trial " << trial;
        ASSERT_EQ(c.has_value(), e.has_value()) << "trial " << trial;
        if (!c) continue;
        ++compared;
        expect_same_points(*c, *f);
        expect_same_points(*c, *e);
    }
    EXPECT_GT(compared, 15);
}

TEST(Intersect, StableDegreeSameForBothSearches) {
    auto t = trop_linear_space(running_block(), true, FanOptions{false, kDefaultFlagBudget});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 a(seed), b(seed);
        IntersectOptions flags;
        flags.search = IntersectSearch::Flags;
        EXPECT_EQ(stable_intersect(t, running_wdir(), {0, 1, 2, 3}, a).total_degree, 3);
        EXPECT_EQ(stable_intersect(t, running_wdir(), {0, 1, 2, 3}, b, flags).total_degree, 3);
    }
}

TEST(Intersect, BinomialLineAgainstAffineLine) {
    // <x1 + x2 - 1> meets <x1 x2 - t> in two points over Puiseux series
    auto t = line();
    auto r = intersect_at_shift(t, antidiagonal(), {Rat(3), Rat(-2)});
    ASSERT_TRUE(r);
    EXPECT_EQ(r->total_degree, 2);
}
