#pragma once

#include "jtri/majorize.hpp"
#include "jtri/matrix.hpp"

#include <cstddef>

namespace jtri {

/// Generalized singular values of a pair (A1, A2): the roots a of
/// det(A1^H A1 - a^2 A2^H A2) = 0.
///
/// `values` holds the finite positive roots in non-increasing order; zero and
/// infinite roots are only counted. A pair of proper dimensions has
/// exactly n finite positive values.
struct GsvSpectrum {
    RealVector values;
    std::size_t zero_count = 0;
    std::size_t infinite_count = 0;

    [[nodiscard]] std::size_t size() const noexcept { return values.size() + zero_count + infinite_count; }
    [[nodiscard]] bool all_finite_positive() const noexcept { return zero_count == 0 && infinite_count == 0; }
    /// Throws RankDeficient when zero or infinite values are present.
    [[nodiscard]] PositiveVector as_positive() const;
};

/// A = U T V^H with T generalized upper-triangular with a prescribed,
/// positive diagonal.
struct GtdFactors {
    ComplexMatrix u;
    ComplexMatrix t;
    ComplexMatrix v;
};

/// A1 = U1 T1 V^H, A2 = U2 T2 V^H with a shared right unitary V.
/// `ratio` is the realized diagonal-ratio vector T1_jj / T2_jj.
struct JointTriangularization {
    ComplexMatrix u1;
    ComplexMatrix u2;
    ComplexMatrix v;
    ComplexMatrix t1;
    ComplexMatrix t2;
    PositiveVector ratio;
};

/// Residuals of a unitary triangularization, all relative to the inputs.
struct GtdCheck {
    double reconstruction = 0.0;
    double unitarity_u = 0.0;
    double unitarity_v = 0.0;
    double below_diagonal = 0.0;
    double diagonal_error = 0.0;
};

struct JointCheck {
    double reconstruction1 = 0.0;
    double reconstruction2 = 0.0;
    double unitarity_u1 = 0.0;
    double unitarity_u2 = 0.0;
    double unitarity_v = 0.0;
    double below_diagonal = 0.0;
    /// max_j |ratio_j / r_j - 1| against the requested ratio (0 if none given).
    double ratio_error = 0.0;
    bool diagonals_positive = false;
};

GsvSpectrum gsv(const ComplexMatrix& a1, const ComplexMatrix& a2);

/// Unitary triangularization with diagonal `t` (consumed in the given order).
/// Throws NotMajorized when sigma(a) does not majorize t.
GtdFactors gtd(const ComplexMatrix& a, const PositiveVector& t, double tol = kDefaultMajorizationTol);

/// Geometric mean decomposition: gtd with a constant diagonal.
GtdFactors gmd(const ComplexMatrix& a);

/// Joint triangularization of two square non-singular matrices with diagonal
/// ratio `r`: GTD of A1 A2^-1 followed by an RQ step on each U_i^H A_i.
JointTriangularization joint_triangularize_square(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                                  const PositiveVector& r,
                                                  double tol = kDefaultMajorizationTol);

/// General proper-dimension case: QR of each matrix, the square routine on
/// the square parts, then embedding.
JointTriangularization joint_triangularize(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                           const PositiveVector& r, double tol = kDefaultMajorizationTol);

/// Joint triangularization with a constant ratio equal to the geometric mean
/// of the GSVs. Always exists.
JointTriangularization joint_equal_ratio(const ComplexMatrix& a1, const ComplexMatrix& a2);

/// Triangular GSVD: the joint triangularization whose ratio equals the GSVs.
JointTriangularization gsvd_triangular(const ComplexMatrix& a1, const ComplexMatrix& a2);

GtdCheck verify_gtd(const ComplexMatrix& a, const GtdFactors& f, const PositiveVector& target);
JointCheck verify_joint(const ComplexMatrix& a1, const ComplexMatrix& a2, const JointTriangularization& j,
                        const PositiveVector* requested = nullptr);

} // namespace jtri
