#include <gtest/gtest.h>

#include "jtri/decomp.hpp"
#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace jtri;
using jtri::testing::random_matrix;

namespace {

PositiveVector random_majorized(std::mt19937_64& rng, const PositiveVector& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::exp(lambda * std::log(x[i]) + (1.0 - lambda) * std::log(x[perm[i]]));
    }
    return PositiveVector(std::move(y));
}

// Same product as mu, but the largest entry exceeds mu's largest.
PositiveVector random_infeasible(std::mt19937_64& rng, const PositiveVector& mu) {
    const std::size_t n = mu.size();
    const auto s = mu.sorted_descending();
    const double boost = 1.0 + std::uniform_real_distribution<double>(0.05, 2.0)(rng);
    RealVector r(n);
    r[0] = s[0] * boost;
    for (std::size_t i = 1; i < n; ++i) {
        r[i] = s[i] * std::pow(boost, -1.0 / static_cast<double>(n - 1));
    }
    std::shuffle(r.begin(), r.end(), rng);
    return PositiveVector(std::move(r));
}

void expect_joint_invariants(const ComplexMatrix& a1, const ComplexMatrix& a2, const JointTriangularization& j,
                             const PositiveVector& r) {
    const auto c = verify_joint(a1, a2, j, &r);
    EXPECT_LE(c.reconstruction1, 1e-9);
    EXPECT_LE(c.reconstruction2, 1e-9);
    EXPECT_LE(c.unitarity_u1, 1e-10);
    EXPECT_LE(c.unitarity_u2, 1e-10);
    EXPECT_LE(c.unitarity_v, 1e-10);
    EXPECT_LE(c.below_diagonal, 1e-12);
    EXPECT_TRUE(c.diagonals_positive);
    EXPECT_LE(c.ratio_error, 1e-9);
}

} // namespace

TEST(Gsv, Examples) {
    const auto a = gsv(ComplexMatrix::diagonal(std::vector<double>{2.0, 1.0}), ComplexMatrix::identity(2));
    EXPECT_LE(jtri::testing::max_abs_diff(a.values, {2.0, 1.0}), 1e-14);

    const auto b = gsv(ComplexMatrix::diagonal(std::vector<double>{1.0, 10.0}),
                       ComplexMatrix::diagonal(std::vector<double>{2.0, 2.0}));
    EXPECT_LE(jtri::testing::max_abs_diff(b.values, {5.0, 0.5}), 1e-14);
    EXPECT_TRUE(b.all_finite_positive());

    std::mt19937_64 rng(201);
    const auto a1 = random_matrix(rng, 4, 4);
    const auto c = gsv(a1, a1);
    for (double v : c.values) {
        EXPECT_NEAR(v, 1.0, 1e-10);
    }
}

TEST(Gsv, Errors) {
    EXPECT_THROW(gsv(ComplexMatrix(2, 2), ComplexMatrix(2, 3)), DimensionMismatch);
    EXPECT_THROW(gsv(ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}, ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}), RankDeficient);
}

TEST(Gsv, CountsZeroAndInfiniteValues) {
    const auto z = gsv(ComplexMatrix::diagonal(std::vector<double>{2.0, 0.0}), ComplexMatrix::identity(2));
    EXPECT_EQ(z.zero_count, 1u);
    EXPECT_EQ(z.values.size(), 1u);
    EXPECT_THROW((void)z.as_positive(), RankDeficient);

    const auto inf = gsv(ComplexMatrix::identity(2), ComplexMatrix::diagonal(std::vector<double>{2.0, 0.0}));
    EXPECT_EQ(inf.infinite_count, 1u);
    ASSERT_EQ(inf.values.size(), 1u);
    EXPECT_NEAR(inf.values[0], 0.5, 1e-15);
}

TEST(Gsv, MatchesPencilOracle) {
    std::mt19937_64 rng(203);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const auto a1 = random_matrix(rng, n + static_cast<std::size_t>(trial % 3), n);
        const auto a2 = random_matrix(rng, n + static_cast<std::size_t>(trial % 2), n);
        const auto mu = gsv(a1, a2);
        ASSERT_TRUE(mu.all_finite_positive());
        ASSERT_LE(jtri::testing::max_rel_diff(mu.values, jtri::testing::oracle_gsv(a1, a2)), 1e-8);
    }
}

TEST(Gsv, UnitaryInvariance) {
    std::mt19937_64 rng(205);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const std::size_t m1 = n + static_cast<std::size_t>(trial % 3);
        const std::size_t m2 = n + 1;
        const auto a1 = random_matrix(rng, m1, n);
        const auto a2 = random_matrix(rng, m2, n);
        const auto q1 = jtri::testing::random_unitary(rng, m1);
        const auto q2 = jtri::testing::random_unitary(rng, m2);
        ASSERT_LE(jtri::testing::max_rel_diff(gsv(q1 * a1, q2 * a2).values, gsv(a1, a2).values), 1e-9);
    }
}

TEST(Gtd, Examples) {
    const auto a = ComplexMatrix::diagonal(std::vector<double>{4.0, 1.0});
    const PositiveVector gm{2.0, 2.0};
    const auto f = gtd(a, gm);
    const auto c = verify_gtd(a, f, gm);
    EXPECT_LE(c.reconstruction, 1e-12);
    EXPECT_LE(c.diagonal_error, 1e-12);
    EXPECT_LE(c.below_diagonal, 1e-15);
    EXPECT_LE(c.unitarity_u, 1e-13);
    EXPECT_LE(c.unitarity_v, 1e-13);

    const PositiveVector same{4.0, 1.0};
    const auto g = gtd(a, same);
    EXPECT_LE(distance(g.t, a), 1e-14);
    EXPECT_LE(distance(g.u, ComplexMatrix::identity(2)), 1e-14);
    EXPECT_LE(distance(g.v, ComplexMatrix::identity(2)), 1e-14);

    try {
        (void)gtd(a, {8.0, 0.5});
        FAIL() << "expected NotMajorized";
    } catch (const NotMajorized& e) {
        EXPECT_EQ(e.prefix(), 1u);
    }
}

TEST(Gtd, Errors) {
    EXPECT_THROW(gtd(ComplexMatrix(2, 3), {1.0, 1.0, 1.0}), InvalidDimensions);
    EXPECT_THROW(gtd(ComplexMatrix::identity(2), {1.0}), DimensionMismatch);
    EXPECT_THROW(gtd(ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0}), {1.0, 1.0}), RankDeficient);
}

TEST(Gtd, TargetInGivenOrder) {
    const auto a = ComplexMatrix::diagonal(std::vector<double>{5.0, 3.0, 0.5});
    const PositiveVector t{1.0, 3.0, 2.5};
    const auto f = gtd(a, t);
    const auto c = verify_gtd(a, f, t);
    EXPECT_LE(c.reconstruction, 1e-12);
    EXPECT_LE(c.diagonal_error, 1e-12);
}

TEST(Gtd, RandomTargets) {
    std::mt19937_64 rng(207);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        const std::size_t m = n + static_cast<std::size_t>(trial % 3);
        const auto a = random_matrix(rng, m, n);
        const auto t = random_majorized(rng, PositiveVector(singular_values(a)));
        const auto f = gtd(a, t);
        const auto c = verify_gtd(a, f, t);
        ASSERT_LE(c.reconstruction, 1e-9) << trial;
        ASSERT_LE(c.unitarity_u, 1e-10);
        ASSERT_LE(c.unitarity_v, 1e-10);
        ASSERT_LE(c.below_diagonal, 1e-14);
        ASSERT_LE(c.diagonal_error, 1e-9);
        const auto d = f.t.real_diagonal();
        double lp = 0.0;
        for (double x : d) {
            lp += std::log(x);
        }
        ASSERT_NEAR(lp, PositiveVector(singular_values(a)).log_product(), 1e-9 * std::max(1.0, std::abs(lp)));
    }
}

TEST(Gtd, SingularValueTargetGivesDiagonal) {
    std::mt19937_64 rng(209);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        const auto a = random_matrix(rng, n + 1, n);
        const PositiveVector s(singular_values(a));
        const auto f = gtd(a, s);
        double off = 0.0;
        for (std::size_t i = 0; i < f.t.rows(); ++i) {
            for (std::size_t j = 0; j < f.t.cols(); ++j) {
                if (i != j) {
                    off += std::norm(f.t(i, j));
                }
            }
        }
        ASSERT_LE(std::sqrt(off), 1e-9 * f.t.frobenius_norm());
    }
}

TEST(Gmd, Examples) {
    const auto f = gmd(ComplexMatrix::diagonal(std::vector<double>{4.0, 1.0}));
    EXPECT_LE(jtri::testing::max_abs_diff(f.t.real_diagonal(), {2.0, 2.0}), 1e-13);

    std::mt19937_64 rng(211);
    const auto u = jtri::testing::random_unitary(rng, 4);
    const auto g = gmd(u);
    EXPECT_LE(jtri::testing::max_abs_diff(g.t.real_diagonal(), RealVector(4, 1.0)), 1e-12);

    const auto h = gmd(ComplexMatrix::diagonal(std::vector<double>{8.0, 1.0, 1.0}));
    EXPECT_LE(jtri::testing::max_abs_diff(h.t.real_diagonal(), {2.0, 2.0, 2.0}), 1e-13);
}

TEST(JointSquare, Examples) {
    const auto a1 = ComplexMatrix::diagonal(std::vector<double>{2.0, 1.0});
    const auto a2 = ComplexMatrix::identity(2);
    const PositiveVector r{std::sqrt(2.0), std::sqrt(2.0)};
    const auto j = joint_triangularize_square(a1, a2, r);
    expect_joint_invariants(a1, a2, j, r);

    std::mt19937_64 rng(213);
    const auto b = random_matrix(rng, 3, 3);
    const PositiveVector ones{1.0, 1.0, 1.0};
    const auto k = joint_triangularize_square(b, b, ones);
    expect_joint_invariants(b, b, k, ones);
    EXPECT_LE(relative_distance(k.t1, k.t2), 1e-9);

    try {
        (void)joint_triangularize_square(a1, a2, {4.0, 0.5});
        FAIL() << "expected NotMajorized";
    } catch (const NotMajorized& e) {
        EXPECT_EQ(e.prefix(), 1u);
    }
    EXPECT_THROW(joint_triangularize_square(ComplexMatrix(3, 2), ComplexMatrix(3, 2), {1.0, 1.0}),
                 InvalidDimensions);
}

TEST(Joint, Examples) {
    std::mt19937_64 rng(215);
    const auto a1 = random_matrix(rng, 4, 2);
    const auto a2 = random_matrix(rng, 3, 2);
    const auto r = geometric_mean_vector(gsv(a1, a2).as_positive());
    const auto j = joint_triangularize(a1, a2, r);
    EXPECT_EQ(j.u1.rows(), 4u);
    EXPECT_EQ(j.t2.rows(), 3u);
    expect_joint_invariants(a1, a2, j, r);

    const auto b = random_matrix(rng, 3, 3);
    const auto stacked = vstack(b, ComplexMatrix(2, 3));
    const auto mu = gsv(b, stacked);
    EXPECT_LE(jtri::testing::max_abs_diff(mu.values, RealVector(3, 1.0)), 1e-10);
    const PositiveVector ones{1.0, 1.0, 1.0};
    expect_joint_invariants(b, stacked, joint_triangularize(b, stacked, ones), ones);

    EXPECT_THROW(joint_triangularize(ComplexMatrix(2, 3), ComplexMatrix(3, 3), ones), InvalidDimensions);
    EXPECT_THROW(joint_triangularize(ComplexMatrix(3, 3), ComplexMatrix(3, 2), ones), DimensionMismatch);
}

TEST(Joint, EqualRatioAndGsvd) {
    const auto a1 = ComplexMatrix::diagonal(std::vector<double>{2.0, 1.0});
    const auto a2 = ComplexMatrix::identity(2);
    EXPECT_LE(jtri::testing::max_abs_diff(joint_equal_ratio(a1, a2).ratio.values(),
                                          {std::sqrt(2.0), std::sqrt(2.0)}),
              1e-12);
    EXPECT_LE(jtri::testing::max_abs_diff(gsvd_triangular(a1, a2).ratio.values(), {2.0, 1.0}), 1e-12);
    EXPECT_LE(jtri::testing::max_abs_diff(gsvd_triangular(a1, a1).ratio.values(), {1.0, 1.0}), 1e-12);

    std::mt19937_64 rng(217);
    for (int trial = 0; trial < 100; ++trial) {
        const auto b1 = random_matrix(rng, 3, 3);
        const auto b2 = random_matrix(rng, 3, 3);
        const auto j = gsvd_triangular(b1, b2);
        const auto sorted = j.ratio.sorted_descending();
        ASSERT_LE(jtri::testing::max_rel_diff(sorted.values(), jtri::testing::oracle_gsv(b1, b2)), 1e-8);

        const auto e = joint_equal_ratio(b1, b2);
        for (std::size_t k = 1; k < 3; ++k) {
            ASSERT_NEAR(e.ratio[k] / e.ratio[0], 1.0, 1e-9);
        }
    }
}

TEST(Joint, RandomFeasibleInvariants) {
    std::mt19937_64 rng(219);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        const auto a1 = random_matrix(rng, n + static_cast<std::size_t>(trial % 3), n);
        const auto a2 = random_matrix(rng, n + static_cast<std::size_t>((trial / 3) % 2), n);
        const auto mu = gsv(a1, a2).as_positive();
        const auto r = random_majorized(rng, mu);
        const auto j = joint_triangularize(a1, a2, r);
        SCOPED_TRACE(trial);
        expect_joint_invariants(a1, a2, j, r);

        // determinant conservation
        ASSERT_NEAR(j.ratio.log_product(), mu.log_product(), 1e-8 * std::max(1.0, std::abs(mu.log_product())));
        // unitary invariance of the GSVs
        const std::size_t nn = a1.cols();
        const auto mt = gsv(j.t1.block(0, 0, nn, nn), j.t2.block(0, 0, nn, nn));
        ASSERT_LE(jtri::testing::max_rel_diff(mt.values, mu.values()), 1e-8);
        // each factor satisfies Weyl's condition on its own
        ASSERT_TRUE(majorizes(PositiveVector(singular_values(a1)), PositiveVector(j.t1.real_diagonal())));
        ASSERT_TRUE(majorizes(PositiveVector(singular_values(a2)), PositiveVector(j.t2.real_diagonal())));
    }
}

TEST(Joint, InfeasibleRatiosAreRejected) {
    std::mt19937_64 rng(221);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        const auto a1 = random_matrix(rng, n + static_cast<std::size_t>(trial % 2), n);
        const auto a2 = random_matrix(rng, n, n);
        const auto r = random_infeasible(rng, gsv(a1, a2).as_positive());
        ASSERT_THROW(joint_triangularize(a1, a2, r), NotMajorized) << trial;
    }
}
