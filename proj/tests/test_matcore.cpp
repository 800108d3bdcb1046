#include <gtest/gtest.h>

#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>

using namespace jtri;
using jtri::testing::random_matrix;

namespace {

void expect_generalized_upper(const ComplexMatrix& r, double tol) {
    const double scale = std::max(r.frobenius_norm(), 1e-300);
    EXPECT_LE(max_below_diagonal(r), tol * scale);
    for (std::size_t i = 0; i < std::min(r.rows(), r.cols()); ++i) {
        EXPECT_GE(r(i, i).real(), 0.0);
        EXPECT_EQ(r(i, i).imag(), 0.0);
    }
}

} // namespace

TEST(Matrix, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(ComplexMatrix(0, 3), InvalidDimensions);
    EXPECT_THROW(ComplexMatrix(2, 0), InvalidDimensions);
    EXPECT_THROW(ComplexMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidValue);
    EXPECT_THROW(ComplexMatrix(1, 2, {1.0}), InvalidDimensions);
    EXPECT_THROW(ComplexMatrix(1, 1, {Complex(0.0, std::numeric_limits<double>::infinity())}), InvalidValue);
}

TEST(Qr, IdentityIsFixed) {
    const auto [q, r] = qr(ComplexMatrix::identity(2));
    EXPECT_LE(distance(q, ComplexMatrix::identity(2)), 1e-15);
    EXPECT_LE(distance(r, ComplexMatrix::identity(2)), 1e-15);
}

TEST(Qr, PermutationGivesIdentityR) {
    const ComplexMatrix a{{0.0, 1.0}, {1.0, 0.0}};
    const auto [q, r] = qr(a);
    EXPECT_LE(distance(r, ComplexMatrix::identity(2)), 1e-14);
    EXPECT_LE(distance(q * r, a), 1e-14);
    EXPECT_TRUE(is_unitary(q, 1e-14));
}

TEST(Qr, RandomTallReconstructs) {
    std::mt19937_64 rng(7);
    const auto a = random_matrix(rng, 6, 3);
    const auto [q, r] = qr(a);
    EXPECT_EQ(q.rows(), 6u);
    EXPECT_EQ(r.rows(), 6u);
    EXPECT_EQ(r.cols(), 3u);
    EXPECT_LE(distance(a, q * r), 1e-10 * a.frobenius_norm());
    EXPECT_LE(unitarity_error(q), 1e-10 * 6);
    expect_generalized_upper(r, 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_GT(r(i, i).real(), 0.0);
    }
}

TEST(Qr, SeededShapesUpToEight) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = dim(rng);
        const std::size_t n = dim(rng);
        const auto a = random_matrix(rng, m, n);
        const auto [q, r] = qr(a);
        ASSERT_EQ(q.rows(), m);
        ASSERT_EQ(r.cols(), n);
        ASSERT_LE(relative_distance(a, q * r), 1e-10) << m << "x" << n;
        ASSERT_LE(unitarity_error(q), 1e-10 * static_cast<double>(m));
        expect_generalized_upper(r, 1e-12);
    }
}

TEST(Rq, IdentityAndTriangularFixedPoints) {
    {
        const auto [t, q] = rq(ComplexMatrix::identity(2));
        EXPECT_LE(distance(t, ComplexMatrix::identity(2)), 1e-15);
        EXPECT_LE(distance(q, ComplexMatrix::identity(2)), 1e-15);
    }
    const ComplexMatrix upper{{2.0, Complex(1.0, -0.5), 3.0}, {0.0, 0.5, Complex(0.0, 2.0)}, {0.0, 0.0, 4.0}};
    const auto [t, q] = rq(upper);
    EXPECT_LE(distance(t, upper), 1e-14);
    EXPECT_LE(distance(q, ComplexMatrix::identity(3)), 1e-14);
}

TEST(Rq, RandomReconstructs) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
        const auto a = random_matrix(rng, n, n);
        const auto [t, q] = rq(a);
        ASSERT_LE(relative_distance(a, t * q.adjoint()), 1e-10);
        ASSERT_LE(unitarity_error(q), 1e-10 * static_cast<double>(n));
        ASSERT_EQ(max_below_diagonal(t), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_GT(t(i, i).real(), 0.0);
            ASSERT_EQ(t(i, i).imag(), 0.0);
        }
    }
}

TEST(Rq, Errors) {
    EXPECT_THROW(rq(ComplexMatrix{{1.0, 2.0}, {2.0, 4.0}}), RankDeficient);
    EXPECT_THROW(rq(ComplexMatrix(3, 2)), InvalidDimensions);
}

TEST(Svd, DiagonalAndUnitaryInputs) {
    const std::vector<double> d{3.0, 1.0};
    EXPECT_LE(jtri::testing::max_abs_diff(singular_values(ComplexMatrix::diagonal(d)), d), 1e-15);

    std::mt19937_64 rng(5);
    const auto u = jtri::testing::random_unitary(rng, 4);
    for (double s : singular_values(u)) {
        EXPECT_NEAR(s, 1.0, 1e-13);
    }
}

TEST(Svd, MatchesEigenvaluesOfGram) {
    std::mt19937_64 rng(17);
    const auto a = random_matrix(rng, 5, 2);
    const auto f = svd(a);
    EXPECT_LE(jtri::testing::max_abs_diff(f.sigma, jtri::testing::oracle_singular_values(a)), 1e-9);
}

TEST(Svd, SeededReconstructionAndOrdering) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = dim(rng);
        const std::size_t n = dim(rng);
        const auto a = random_matrix(rng, m, n);
        const auto f = svd(a);
        const std::size_t k = std::min(m, n);
        ASSERT_EQ(f.sigma.size(), k);
        ASSERT_EQ(f.u.cols(), k);
        ASSERT_EQ(f.v.cols(), k);
        ASSERT_LE(relative_distance(a, f.u * ComplexMatrix::diagonal(f.sigma) * f.v.adjoint()), 1e-10);
        ASSERT_LE(unitarity_error(f.u), 1e-10);
        ASSERT_LE(unitarity_error(f.v), 1e-10);
        for (std::size_t j = 0; j + 1 < k; ++j) {
            ASSERT_GE(f.sigma[j], f.sigma[j + 1]);
        }
        ASSERT_GT(f.sigma.back(), 0.0);
    }
}

TEST(Svd, AdjointHasSameSpectrum) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
        const auto a = random_matrix(rng, n, n);
        ASSERT_LE(jtri::testing::max_abs_diff(singular_values(a), singular_values(a.adjoint())), 1e-10);
    }
}

TEST(Svd, RankDeficientInputKeepsOrthonormalU) {
    ComplexMatrix a(4, 3);
    a(0, 0) = 2.0;
    a(1, 0) = 1.0;
    const auto f = svd(a);
    EXPECT_NEAR(f.sigma[0], std::sqrt(5.0), 1e-14);
    EXPECT_EQ(f.sigma[1], 0.0);
    EXPECT_EQ(f.sigma[2], 0.0);
    EXPECT_LE(unitarity_error(f.u), 1e-12);
    EXPECT_LE(relative_distance(a, f.u * ComplexMatrix::diagonal(f.sigma) * f.v.adjoint()), 1e-14);
}

TEST(IsUnitary, Examples) {
    EXPECT_TRUE(is_unitary(ComplexMatrix::identity(3), 1e-10));
    EXPECT_FALSE(is_unitary(Complex(2.0) * ComplexMatrix::identity(3), 1e-10));
    EXPECT_FALSE(is_unitary(ComplexMatrix(3, 2), 1e-10));

    // Householder reflector I - 2 v v^H / (v^H v)
    const ComplexMatrix v{{Complex(1.0, 2.0)}, {-0.5}, {Complex(0.0, 3.0)}};
    const double vv = (v.adjoint() * v)(0, 0).real();
    const ComplexMatrix h = ComplexMatrix::identity(3) - Complex(2.0 / vv) * (v * v.adjoint());
    EXPECT_TRUE(is_unitary(h, 1e-10));
}

TEST(HermitianEig, MatchesEigen) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 7);
        const auto b = random_matrix(rng, n, n);
        const auto h = b + b.adjoint();
        const auto e = hermitian_eig(h);
        Eigen::SelfAdjointEigenSolver<jtri::testing::EigenMatrix> es(jtri::testing::to_eigen(h));
        std::vector<double> expect(es.eigenvalues().data(), es.eigenvalues().data() + n);
        std::sort(expect.begin(), expect.end(), std::greater<>{});
        ASSERT_LE(jtri::testing::max_abs_diff(e.values, expect), 1e-12 * std::max(1.0, h.frobenius_norm()));
        ASSERT_LE(relative_distance(h, e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint()),
                  1e-12);
    }
}

TEST(PsdSqrt, SquaresBackAndClipsRoundoff) {
    std::mt19937_64 rng(37);
    const auto c = jtri::testing::random_psd(rng, 3, 2, 2.0);
    const auto s = psd_sqrt(c);
    EXPECT_LE(relative_distance(c, s * s.adjoint()), 1e-12);
    EXPECT_LE(distance(s, s.adjoint()), 1e-12);

    ComplexMatrix tiny_negative = ComplexMatrix::diagonal(std::vector<double>{1.0, -1e-14});
    EXPECT_NO_THROW(psd_sqrt(tiny_negative));
    EXPECT_THROW(psd_sqrt(ComplexMatrix::diagonal(std::vector<double>{1.0, -1e-3})), InvalidValue);
}

TEST(Helpers, InverseDeterminantAndCompletion) {
    std::mt19937_64 rng(41);
    const auto a = random_matrix(rng, 4, 4);
    EXPECT_LE(distance(a * inverse(a), ComplexMatrix::identity(4)), 1e-12);
    const double ld = std::log2(std::abs(jtri::testing::to_eigen(a).determinant()));
    EXPECT_NEAR(log2_abs_det(a), ld, 1e-12);

    const auto thin = svd(random_matrix(rng, 5, 2)).u;
    const auto full = complete_unitary(thin);
    EXPECT_LE(unitarity_error(full), 1e-13);
    EXPECT_LE(distance(full.block(0, 0, 5, 2), thin), 1e-15);
}
