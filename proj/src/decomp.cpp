#include "jtri/decomp.hpp"

#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jtri {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Diagonal entries this close (relative) to a target are taken as equal to it.
constexpr double kTieTol = 1e-12;
constexpr double kRankTol = 1e-12;

// Working state of the Givens chain: diag(sigma) = left * r * right^H.
struct Chain {
    ComplexMatrix r;
    ComplexMatrix left;
    ComplexMatrix right;
};

void swap_index(Chain& c, std::size_t i, std::size_t j) {
    if (i == j) {
        return;
    }
    const std::size_t n = c.r.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::swap(c.r(i, k), c.r(j, k));
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::swap(c.r(k, i), c.r(k, j));
        std::swap(c.left(k, i), c.left(k, j));
        std::swap(c.right(k, i), c.right(k, j));
    }
}

// Rotates the 2x2 diagonal block at (k, k+1), diag(d1, d2) with
// d1 > tau > d2, into [[tau, x], [0, d1 d2 / tau]].
void shape_pair(Chain& c, std::size_t k, double tau) {
    const std::size_t n = c.r.rows();
    const double d1 = c.r(k, k).real();
    const double d2 = c.r(k + 1, k + 1).real();
    const double denom = (d1 - d2) * (d1 + d2);
    const double cc = std::sqrt(std::clamp((tau - d2) * (tau + d2) / denom, 0.0, 1.0));
    const double ss = std::sqrt(std::clamp((d1 - tau) * (d1 + tau) / denom, 0.0, 1.0));

    // right rotation [[c, -s], [s, c]] on columns k, k+1
    for (std::size_t i = 0; i <= k + 1; ++i) {
        const Complex x = c.r(i, k);
        const Complex y = c.r(i, k + 1);
        c.r(i, k) = cc * x + ss * y;
        c.r(i, k + 1) = -ss * x + cc * y;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Complex x = c.right(i, k);
        const Complex y = c.right(i, k + 1);
        c.right(i, k) = cc * x + ss * y;
        c.right(i, k + 1) = -ss * x + cc * y;
    }
    // left rotation g = [[c d1, -s d2], [s d2, c d1]] / tau, applied as g^T
    const double g00 = cc * d1 / tau;
    const double g01 = -ss * d2 / tau;
    const double g10 = ss * d2 / tau;
    const double g11 = cc * d1 / tau;
    for (std::size_t j = k; j < n; ++j) {
        const Complex x = c.r(k, j);
        const Complex y = c.r(k + 1, j);
        c.r(k, j) = g00 * x + g10 * y;
        c.r(k + 1, j) = g01 * x + g11 * y;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Complex x = c.left(i, k);
        const Complex y = c.left(i, k + 1);
        c.left(i, k) = x * g00 + y * g10;
        c.left(i, k + 1) = x * g01 + y * g11;
    }
    c.r(k, k) = tau;
    c.r(k + 1, k) = 0.0;
    c.r(k + 1, k + 1) = d1 * d2 / tau;
}

// Givens-chain GTD of diag(sigma). Targets are consumed in order; a target
// outside the range of the remaining diagonal is clipped onto it.
Chain shape_diagonal(const RealVector& sigma, const RealVector& targets) {
    const std::size_t n = sigma.size();
    Chain c{ComplexMatrix::diagonal(sigma), ComplexMatrix::identity(n), ComplexMatrix::identity(n)};

    for (std::size_t k = 0; k + 1 < n; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            lo = std::min(lo, c.r(i, i).real());
            hi = std::max(hi, c.r(i, i).real());
        }
        const double tau = std::clamp(targets[k], lo, hi);

        std::size_t tie = n;
        for (std::size_t i = k; i < n; ++i) {
            if (std::abs(c.r(i, i).real() - tau) <= kTieTol * tau) {
                tie = i;
                break;
            }
        }
        if (tie < n) {
            swap_index(c, k, tie);
            continue;
        }

        // adjacent straddling pair: smallest entry above tau, largest below
        std::size_t above = n;
        std::size_t below = n;
        for (std::size_t i = k; i < n; ++i) {
            const double d = c.r(i, i).real();
            if (d > tau && (above == n || d < c.r(above, above).real())) {
                above = i;
            }
            if (d < tau && (below == n || d > c.r(below, below).real())) {
                below = i;
            }
        }
        swap_index(c, k, above);
        if (below == k) {
            below = above;
        }
        swap_index(c, k + 1, below);
        shape_pair(c, k, tau);
    }
    return c;
}

RealVector scaled_to_product(const RealVector& t, double log_target) {
    double lt = 0.0;
    for (double x : t) {
        lt += std::log(x);
    }
    const double f = std::exp((log_target - lt) / static_cast<double>(t.size()));
    RealVector out(t);
    for (double& x : out) {
        x *= f;
    }
    return out;
}

// GTD of a tall full-column-rank matrix whose feasibility was already
// established by the caller.
GtdFactors gtd_unchecked(const ComplexMatrix& a, const PositiveVector& t) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    auto s = svd(a);
    double log_sigma = 0.0;
    for (double x : s.sigma) {
        log_sigma += std::log(x);
    }
    const auto targets = scaled_to_product(t.values(), log_sigma);
    auto chain = shape_diagonal(s.sigma, targets);

    ComplexMatrix u = complete_unitary(s.u);
    if (m > n) {
        u = u * block_diagonal(chain.left, ComplexMatrix::identity(m - n));
    } else {
        u = u * chain.left;
    }
    ComplexMatrix tt(m, n);
    tt.set_block(0, 0, chain.r);
    return {std::move(u), std::move(tt), s.v * chain.right};
}

void require_proper(const ComplexMatrix& a, const char* what) {
    if (a.rows() < a.cols()) {
        throw InvalidDimensions(std::string(what) + ": need rows >= cols, got " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
    }
}

[[noreturn]] void throw_not_majorized(const MajorizationReport& rep, const char* what) {
    const std::size_t k = rep.violated_prefix.value_or(0);
    throw NotMajorized(std::string(what) + ": requested vector is not majorized (prefix " + std::to_string(k) +
                           " violated)",
                       k);
}

// Upper-triangular square part of a full-column-rank tall matrix.
QrFactors qr_proper(const ComplexMatrix& a) {
    auto f = qr(a);
    const std::size_t n = a.cols();
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        top = std::max(top, f.r(i, i).real());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(f.r(i, i).real() > kRankTol * top)) {
            throw RankDeficient("matrix does not have full column rank");
        }
    }
    return f;
}

// Finite GSVs of (a1, a2) for a2 of full column rank.
GsvSpectrum gsv_with_invertible_second(const ComplexMatrix& a1, const ComplexMatrix& a2) {
    const std::size_t n = a1.cols();
    const auto f = qr_proper(a2);
    const ComplexMatrix r_inv = solve_upper(f.r.block(0, 0, n, n), ComplexMatrix::identity(n));
    const RealVector s = singular_values(a1 * r_inv);

    GsvSpectrum out;
    const double top = s.empty() ? 0.0 : s.front();
    for (double x : s) {
        if (x > kRankTol * top && x > 0.0) {
            out.values.push_back(x);
        }
    }
    out.zero_count = n - out.values.size();
    return out;
}

bool full_column_rank(const ComplexMatrix& a) {
    if (a.rows() < a.cols()) {
        return false;
    }
    try {
        qr_proper(a);
        return true;
    } catch (const RankDeficient&) {
        return false;
    }
}

RealVector diagonal_ratio(const ComplexMatrix& t1, const ComplexMatrix& t2) {
    const std::size_t n = t1.cols();
    RealVector r(n);
    for (std::size_t j = 0; j < n; ++j) {
        r[j] = t1(j, j).real() / t2(j, j).real();
    }
    return r;
}

} // namespace

PositiveVector GsvSpectrum::as_positive() const {
    if (!all_finite_positive()) {
        throw RankDeficient("GSV spectrum has " + std::to_string(zero_count) + " zero and " +
                            std::to_string(infinite_count) + " infinite values");
    }
    return PositiveVector(values);
}

GsvSpectrum gsv(const ComplexMatrix& a1, const ComplexMatrix& a2) {
    if (a1.cols() != a2.cols()) {
        throw DimensionMismatch("gsv: column counts " + std::to_string(a1.cols()) + " and " +
                                std::to_string(a2.cols()) + " differ");
    }
    if (full_column_rank(a2)) {
        return gsv_with_invertible_second(a1, a2);
    }
    if (full_column_rank(a1)) {
        const auto rev = gsv_with_invertible_second(a2, a1);
        GsvSpectrum out;
        out.infinite_count = rev.zero_count;
        for (auto it = rev.values.rbegin(); it != rev.values.rend(); ++it) {
            out.values.push_back(1.0 / *it);
        }
        return out;
    }
    throw RankDeficient("gsv: neither matrix has full column rank; pair is not in reduced form");
}

GtdFactors gtd(const ComplexMatrix& a, const PositiveVector& t, double tol) {
    require_proper(a, "gtd");
    if (t.size() != a.cols()) {
        throw DimensionMismatch("gtd: target length " + std::to_string(t.size()) + " but matrix has " +
                                std::to_string(a.cols()) + " columns");
    }
    const RealVector s = singular_values(a);
    if (!(s.back() > kRankTol * s.front())) {
        throw RankDeficient("gtd: matrix does not have full column rank");
    }
    const auto rep = check_majorization(PositiveVector(s), t, tol);
    if (!rep.holds) {
        throw_not_majorized(rep, "gtd");
    }
    return gtd_unchecked(a, t);
}

GtdFactors gmd(const ComplexMatrix& a) {
    require_proper(a, "gmd");
    const RealVector s = singular_values(a);
    if (!(s.back() > kRankTol * s.front())) {
        throw RankDeficient("gmd: matrix does not have full column rank");
    }
    return gtd_unchecked(a, geometric_mean_vector(PositiveVector(s)));
}

JointTriangularization joint_triangularize_square(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                                  const PositiveVector& r, double tol) {
    if (!a1.is_square() || !a2.is_square()) {
        throw InvalidDimensions("joint_triangularize_square: square inputs required");
    }
    if (a1.cols() != a2.cols()) {
        throw DimensionMismatch("joint_triangularize_square: sizes differ");
    }
    if (r.size() != a1.cols()) {
        throw DimensionMismatch("joint_triangularize_square: ratio length does not match matrix size");
    }
    const auto mu = gsv(a1, a2).as_positive();
    const auto rep = check_majorization(mu, r, tol);
    if (!rep.holds) {
        throw_not_majorized(rep, "joint_triangularize");
    }

    const std::size_t n = a1.cols();
    const ComplexMatrix b = a1 * inverse(a2);
    const auto g = gtd_unchecked(b, r);
    const ComplexMatrix& u1 = g.u;
    const ComplexMatrix& u2 = g.v;

    auto [t1, v] = rq(u1.adjoint() * a1);
    ComplexMatrix t2 = u2.adjoint() * a2 * v;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            t2(i, j) = 0.0;
        }
        // the shared-V argument forces a positive real diagonal; drop rounding residue
        t2(i, i) = t2(i, i).real();
        if (!(t2(i, i).real() > 0.0)) {
            throw RankDeficient("joint_triangularize_square: second factor lost its positive diagonal");
        }
    }
    PositiveVector ratio(diagonal_ratio(t1, t2));
    return {u1, u2, std::move(v), std::move(t1), std::move(t2), std::move(ratio)};
}

JointTriangularization joint_triangularize(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                           const PositiveVector& r, double tol) {
    if (a1.cols() != a2.cols()) {
        throw DimensionMismatch("joint_triangularize: column counts differ");
    }
    require_proper(a1, "joint_triangularize");
    require_proper(a2, "joint_triangularize");
    if (r.size() != a1.cols()) {
        throw DimensionMismatch("joint_triangularize: ratio length does not match column count");
    }
    if (a1.is_square() && a2.is_square()) {
        return joint_triangularize_square(a1, a2, r, tol);
    }

    const std::size_t n = a1.cols();
    const auto f1 = qr_proper(a1);
    const auto f2 = qr_proper(a2);
    auto sq = joint_triangularize_square(f1.r.block(0, 0, n, n), f2.r.block(0, 0, n, n), r, tol);

    auto embed = [n](const ComplexMatrix& q, const ComplexMatrix& u_small) {
        const std::size_t m = q.rows();
        return m > n ? q * block_diagonal(u_small, ComplexMatrix::identity(m - n)) : q * u_small;
    };
    auto pad = [n](const ComplexMatrix& t, std::size_t m) {
        ComplexMatrix out(m, n);
        out.set_block(0, 0, t);
        return out;
    };
    return {embed(f1.q, sq.u1),     embed(f2.q, sq.u2),       std::move(sq.v),
            pad(sq.t1, a1.rows()), pad(sq.t2, a2.rows()), std::move(sq.ratio)};
}

JointTriangularization joint_equal_ratio(const ComplexMatrix& a1, const ComplexMatrix& a2) {
    const auto mu = gsv(a1, a2).as_positive();
    return joint_triangularize(a1, a2, geometric_mean_vector(mu));
}

JointTriangularization gsvd_triangular(const ComplexMatrix& a1, const ComplexMatrix& a2) {
    const auto mu = gsv(a1, a2).as_positive();
    return joint_triangularize(a1, a2, mu);
}

GtdCheck verify_gtd(const ComplexMatrix& a, const GtdFactors& f, const PositiveVector& target) {
    GtdCheck c;
    c.reconstruction = relative_distance(a, f.u * f.t * f.v.adjoint());
    c.unitarity_u = unitarity_error(f.u);
    c.unitarity_v = unitarity_error(f.v);
    const double scale = std::max(f.t.frobenius_norm(), std::numeric_limits<double>::min());
    c.below_diagonal = max_below_diagonal(f.t) / scale;
    const RealVector d = f.t.real_diagonal();
    for (std::size_t j = 0; j < std::min(d.size(), target.size()); ++j) {
        c.diagonal_error = std::max(c.diagonal_error, std::abs(d[j] / target[j] - 1.0));
    }
    return c;
}

JointCheck verify_joint(const ComplexMatrix& a1, const ComplexMatrix& a2, const JointTriangularization& j,
                        const PositiveVector* requested) {
    JointCheck c;
    c.reconstruction1 = relative_distance(a1, j.u1 * j.t1 * j.v.adjoint());
    c.reconstruction2 = relative_distance(a2, j.u2 * j.t2 * j.v.adjoint());
    c.unitarity_u1 = unitarity_error(j.u1);
    c.unitarity_u2 = unitarity_error(j.u2);
    c.unitarity_v = unitarity_error(j.v);
    const double s1 = std::max(j.t1.frobenius_norm(), std::numeric_limits<double>::min());
    const double s2 = std::max(j.t2.frobenius_norm(), std::numeric_limits<double>::min());
    c.below_diagonal = std::max(max_below_diagonal(j.t1) / s1, max_below_diagonal(j.t2) / s2);

    const std::size_t n = j.t1.cols();
    c.diagonals_positive = true;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex d1 = j.t1(k, k);
        const Complex d2 = j.t2(k, k);
        if (!(d1.real() > 0.0 && d2.real() > 0.0) ||
            std::abs(d1.imag()) > kEps * 16 * d1.real() || std::abs(d2.imag()) > kEps * 16 * d2.real()) {
            c.diagonals_positive = false;
        }
    }
    if (requested != nullptr && requested->size() == n && c.diagonals_positive) {
        const RealVector realized = diagonal_ratio(j.t1, j.t2);
        for (std::size_t k = 0; k < n; ++k) {
            c.ratio_error = std::max(c.ratio_error, std::abs(realized[k] / (*requested)[k] - 1.0));
        }
    }
    return c;
}

} // namespace jtri
