#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "troproot/mixedvol.hpp"

using namespace troproot;

namespace {

using Pts = std::vector<IntVec>;

LatticePolytope poly(std::size_t d, const Pts& pts) { return LatticePolytope(d, pts); }

// Twice the area of the convex hull of 2D points, via monotone chain and shoelace.
long shoelace2(Pts pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return 0;
    auto cross = [](const IntVec& o, const IntVec& a, const IntVec& b) {
        return Int((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])).get_si();
    };
    Pts hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    long area2 = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        area2 += Int(a[0] * b[1] - a[1] * b[0]).get_si();
    }
    return std::abs(area2);
}

Pts random_points(std::mt19937_64& rng, std::size_t d, std::size_t count, int hi) {
    std::uniform_int_distribution<int> c(0, hi);
    Pts pts(count, IntVec(d));
    for (auto& p : pts)
        for (auto& x : p) x = c(rng);
    return pts;
}

std::vector<LatticePolytope> critical_point_polytopes() {
    return {poly(2, {{2, 0}, {1, 1}, {3, 2}, {3, 3}}), poly(2, {{1, 1}, {3, 2}, {3, 3}})};
}

IntVec unit(std::size_t n, std::size_t i) {
    IntVec v(n);
    v[i] = 1;
    return v;
}

IntVec sum_units(std::size_t n, std::initializer_list<std::size_t> idx) {
    IntVec v(n);
    for (auto i : idx) v[i] += 1;
    return v;
}

// Newton polytopes of the specialized one-site cotransversal system in six variables.
std::vector<LatticePolytope> one_site_cotransversal() {
    std::size_t n = 6;
    IntVec zero(n);
    return {
        poly(n, {sum_units(n, {0, 2}), unit(n, 4), unit(n, 5)}),
        poly(n, {unit(n, 4), sum_units(n, {1, 3}), unit(n, 5)}),
        poly(n, {unit(n, 4), unit(n, 5)}),
        poly(n, {unit(n, 0), unit(n, 1), unit(n, 2), unit(n, 3), zero}),
        poly(n, {unit(n, 0), unit(n, 4), zero}),
        poly(n, {unit(n, 1), unit(n, 5), zero}),
    };
}

}  // namespace

TEST(MixedVol, NormalizedVolumeExamples) {
    EXPECT_EQ(normalized_volume(poly(2, {{0, 0}, {1, 0}, {0, 1}})), 1);
    EXPECT_EQ(normalized_volume(poly(2, {{0, 0}, {2, 0}, {0, 3}})), 6);
    EXPECT_EQ(normalized_volume(poly(2, {{0, 0}, {1, 1}, {3, 3}})), 0);
    EXPECT_EQ(normalized_volume(poly(1, {{0}, {4}, {2}})), 4);
    Pts cube;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) cube.push_back({x, y, z});
    EXPECT_EQ(normalized_volume(poly(3, cube)), 6);
    EXPECT_EQ(normalized_volume(poly(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}})), 0);
}

TEST(MixedVol, NormalizedVolumeMatchesShoelace) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = random_points(rng, 2, 3 + trial % 8, 6);
        EXPECT_EQ(normalized_volume(poly(2, pts)).get_si(), shoelace2(pts)) << "trial " << trial;
    }
}

TEST(MixedVol, NormalizedVolumeScalesWithDilation) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        auto pts = random_points(rng, 3, 6, 3);
        Pts doubled = pts;
        for (auto& p : doubled)
            for (auto& x : p) x *= 2;
        EXPECT_EQ(normalized_volume(poly(3, doubled)), 8 * normalized_volume(poly(3, pts)));
    }
}

TEST(MixedVol, OracleExamples) {
    EXPECT_EQ(mixed_volume_oracle({poly(2, {{0, 0}, {2, 0}}), poly(2, {{0, 0}, {0, 3}})}), 6);
    EXPECT_EQ(mixed_volume_oracle({poly(1, {{0}, {4}})}), 4);
    auto simplex = poly(2, {{0, 0}, {1, 0}, {0, 1}});
    EXPECT_EQ(mixed_volume_oracle({simplex, simplex}), 1);
}

TEST(MixedVol, PaperExamples) {
    std::mt19937_64 rng(1);
    auto simplex = poly(2, {{0, 0}, {1, 0}, {0, 1}});
    EXPECT_EQ(mixed_volume({simplex, simplex}, rng), 1);
    EXPECT_EQ(mixed_volume({poly(2, {{0, 0}, {2, 0}}), poly(2, {{0, 0}, {0, 3}})}, rng), 6);
    EXPECT_EQ(mixed_volume({poly(1, {{0}, {4}})}, rng), 4);
    EXPECT_EQ(mixed_volume(critical_point_polytopes(), rng), 5);
    EXPECT_EQ(mixed_volume_oracle(critical_point_polytopes()), 5);
    EXPECT_EQ(mixed_volume(one_site_cotransversal(), rng), 3);
}

TEST(MixedVol, PointPolytopeGivesZero) {
    std::mt19937_64 rng(1);
    EXPECT_EQ(mixed_volume({poly(2, {{1, 1}}), poly(2, {{0, 0}, {1, 0}, {0, 1}})}, rng), 0);
}

TEST(MixedVol, MatchesOracleOnRandomInstances) {
    std::mt19937_64 rng(2025);
    std::uniform_int_distribution<int> nd(1, 3), kd(2, 5);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = nd(rng);
        std::vector<LatticePolytope> ps;
        for (std::size_t i = 0; i < n; ++i) ps.push_back(poly(n, random_points(rng, n, kd(rng), 4)));
        std::mt19937_64 lift(trial);
        EXPECT_EQ(mixed_volume(ps, lift), mixed_volume_oracle(ps)) << "trial " << trial;
    }
}

TEST(MixedVol, Symmetry) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<LatticePolytope> ps;
        for (std::size_t i = 0; i < 3; ++i) ps.push_back(poly(3, random_points(rng, 3, 4, 3)));
        Int base = mixed_volume(ps, rng);
        std::shuffle(ps.begin(), ps.end(), rng);
        EXPECT_EQ(mixed_volume(ps, rng), base);
    }
}

TEST(MixedVol, MonotoneUnderEnlargement) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_points(rng, 2, 3, 4), b = random_points(rng, 2, 3, 4);
        Int base = mixed_volume({poly(2, a), poly(2, b)}, rng);
        auto bigger = a;
        auto extra = random_points(rng, 2, 2, 6);
        bigger.insert(bigger.end(), extra.begin(), extra.end());
        EXPECT_GE(mixed_volume({poly(2, bigger), poly(2, b)}, rng), base);
    }
}

TEST(MixedVol, Multilinearity) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto p1 = poly(2, random_points(rng, 2, 3, 3));
        auto p1b = poly(2, random_points(rng, 2, 3, 3));
        auto p2 = poly(2, random_points(rng, 2, 4, 3));
        Int lhs = mixed_volume({minkowski_sum(p1, p1b), p2}, rng);
        EXPECT_EQ(lhs, mixed_volume({p1, p2}, rng) + mixed_volume({p1b, p2}, rng));
    }
}

TEST(MixedVol, KushnirenkoConsistency) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 2 + trial % 2;
        auto p = poly(n, random_points(rng, n, 5, 3));
        std::vector<LatticePolytope> ps(n, p);
        EXPECT_EQ(mixed_volume(ps, rng), normalized_volume(p));
    }
}

TEST(MixedVol, DeterministicGivenSeed) {
    auto ps = one_site_cotransversal();
    std::mt19937_64 a(77), b(77);
    auto ra = mixed_volume_cells(ps, a), rb = mixed_volume_cells(ps, b);
    EXPECT_EQ(ra.volume, rb.volume);
    EXPECT_EQ(ra.lifting, rb.lifting);
    ASSERT_EQ(ra.cells.size(), rb.cells.size());
    for (std::size_t i = 0; i < ra.cells.size(); ++i) EXPECT_EQ(ra.cells[i].edges, rb.cells[i].edges);
    Int sum = 0;
    for (const auto& c : ra.cells) {
        EXPECT_GT(c.volume, 0);
        sum += c.volume;
    }
    EXPECT_EQ(sum, ra.volume);
}
