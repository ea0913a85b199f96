#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "oracles.hpp"
#include "troproot/exact.hpp"

using namespace troproot;
using namespace troproot::oracle;

TEST(Exact, RankExamples) {
    EXPECT_EQ(rank(RatMatrix::identity(2)), 2u);
    RatMatrix l{{0, 0, 1, 1, 1, 1}, {1, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, 1}};
    EXPECT_EQ(rank(l), 3u);
    EXPECT_EQ(rank(RatMatrix(3, 4)), 0u);
}

TEST(Exact, KernelExamples) {
    RatMatrix a{{1, 1}};
    auto k = kernel_basis(a);
    ASSERT_EQ(k.cols(), 1u);
    EXPECT_EQ(k(0, 0), -k(1, 0));
    EXPECT_NE(k(0, 0), 0);
    EXPECT_EQ(kernel_basis(RatMatrix::identity(3)).cols(), 0u);
}

TEST(Exact, RankNullityRandom) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 8), dimc(1, 12);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = dim(rng), c = dimc(rng);
        IntMatrix m = random_int_matrix(rng, r, c, -2, 2);
        // force some rank deficiency
        if (r > 1 && trial % 3 == 0)
            for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2;
        RatMatrix q = to_rat(m);
        auto k = kernel_basis(q);
        EXPECT_EQ(rank(q) + k.cols(), c);
        auto prod = mul(q, k);
        for (std::size_t i = 0; i < prod.rows(); ++i)
            for (std::size_t j = 0; j < prod.cols(); ++j) EXPECT_EQ(prod(i, j), 0);
    }
}

TEST(Exact, SolveAffine) {
    RatVec b{Rat(3), Rat(-1, 2)};
    auto x = solve_affine(RatMatrix::identity(2), b);
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, b);
    RatMatrix a{{1, 1}};
    auto y = solve_affine(a, {Rat(2)});
    ASSERT_TRUE(y);
    EXPECT_EQ((*y)[0] + (*y)[1], 2);
    RatMatrix c{{1}, {1}};
    EXPECT_FALSE(solve_affine(c, {Rat(0), Rat(1)}));
}

TEST(Exact, SmithExamples) {
    IntMatrix d{{2, 0}, {0, 3}};
    auto f = smith_normal_form(d).invariant_factors();
    EXPECT_EQ(f, (std::vector<Int>{1, 6}));
    IntMatrix row{{2, 3}};
    EXPECT_EQ(smith_normal_form(row).invariant_factors(), (std::vector<Int>{1}));
    auto id = smith_normal_form(IntMatrix::identity(3));
    EXPECT_EQ(id.d, IntMatrix::identity(3));
}

TEST(Exact, SmithProperties) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t r = dim(rng), c = dim(rng);
        IntMatrix m = random_int_matrix(rng, r, c, -6, 6);
        auto sf = smith_normal_form(m);
        EXPECT_EQ(mul(mul(sf.u, m), sf.v), sf.d);
        EXPECT_EQ(abs(determinant(sf.u)), 1);
        EXPECT_EQ(abs(determinant(sf.v)), 1);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j) EXPECT_EQ(sf.d(i, j), 0);
        auto f = sf.invariant_factors();
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_GE(f[i], 0);
            if (i + 1 < f.size() && f[i] != 0) EXPECT_EQ(f[i + 1] % f[i], 0);
            if (i + 1 < f.size() && f[i] == 0) EXPECT_EQ(f[i + 1], 0);
        }
    }
}

TEST(Exact, SublatticeIndexExamples) {
    IntMatrix fig{{1, 1}, {-1, 1}};
    EXPECT_EQ(sublattice_index(fig), 2);
    EXPECT_EQ(sublattice_index(IntMatrix::identity(3)), 1);
    IntMatrix box{{2, 0}, {0, 3}};
    EXPECT_EQ(sublattice_index(box), 6);
    EXPECT_EQ(coset_count(box), 6);
    IntMatrix flat{{1, 2}, {2, 4}};
    EXPECT_THROW(sublattice_index(flat), PreconditionError);
}

TEST(Exact, SublatticeIndexMatchesCosetCount) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dim(1, 3), extra(0, 2);
    int checked = 0;
    while (checked < 60) {
        std::size_t n = dim(rng);
        IntMatrix g = random_int_matrix(rng, n, n + extra(rng), -4, 4);
        if (rank(g) != n) continue;
        Int idx = sublattice_index(g);
        if (idx > 50) continue;
        EXPECT_EQ(idx.get_si(), coset_count(g)) << "trial " << checked;
        ++checked;
    }
}

TEST(Exact, MonomialMapDegreeExamples) {
    IntMatrix a{{2, 3}};
    EXPECT_EQ(monomial_map_degree(a), 1);
    EXPECT_EQ(root_of_unity_count(a, 6), 1);
    IntMatrix two{{2, 0}, {0, 2}};
    EXPECT_EQ(monomial_map_degree(two), 4);
    EXPECT_EQ(root_of_unity_count(two, 2), 4);
    EXPECT_EQ(monomial_map_degree(IntMatrix::identity(3)), 1);
    IntMatrix low{{1, 2}, {2, 4}};
    EXPECT_THROW(monomial_map_degree(low), PreconditionError);
}

TEST(Exact, MonomialMapDegreeMatchesRootsOfUnity) {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> dim(1, 2), cols(1, 3);
    int checked = 0;
    while (checked < 60) {
        std::size_t n = dim(rng);
        IntMatrix m = random_int_matrix(rng, n, n + cols(rng) - 1, -4, 4);
        if (rank(m) != n) continue;
        // any nonzero maximal minor is a multiple of the group exponent
        long big = 0;
        if (n == 1) {
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m(0, j) != 0) big = std::abs(m(0, j).get_si());
        } else {
            for (std::size_t a = 0; a < m.cols() && !big; ++a)
                for (std::size_t b = a + 1; b < m.cols() && !big; ++b) {
                    Int d = abs(determinant(m.select_cols({a, b})));
                    if (d != 0) big = d.get_si();
                }
        }
        EXPECT_EQ(monomial_map_degree(m).get_si(), root_of_unity_count(m, big));
        ++checked;
    }
}

TEST(Exact, SaturationAndHelpers) {
    IntMatrix g{{2}, {4}};
    IntMatrix s = saturate(g);
    ASSERT_EQ(s.cols(), 1u);
    EXPECT_EQ(abs(s(0, 0)), 1);
    EXPECT_EQ(abs(s(1, 0)), 2);
    EXPECT_EQ(clear_denominators({Rat(1, 2), Rat(-1, 3)}), (IntVec{3, -2}));
    EXPECT_EQ(parse_rat("-3/6"), Rat(-1, 2));
    EXPECT_EQ(to_string(Rat(4, 2)), "2");
    EXPECT_THROW(parse_rat("1/0"), ParseError);
    EXPECT_THROW(parse_rat("x"), ParseError);
}

TEST(Exact, LinearFeasibility) {
    // x + y = 1, x >= 2, y >= 0 is empty; dropping y >= 0 is feasible
    RatMatrix eq{{1, 1}};
    RatMatrix le{{-1, 0}, {0, -1}};
    EXPECT_FALSE(lp_feasible_point(eq, {Rat(1)}, le, {Rat(-2), Rat(0)}));
    RatMatrix le2{{-1, 0}};
    auto x = lp_feasible_point(eq, {Rat(1)}, le2, {Rat(-2)});
    ASSERT_TRUE(x);
    EXPECT_GE((*x)[0], 2);
    EXPECT_EQ((*x)[0] + (*x)[1], 1);
}
