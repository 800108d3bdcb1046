#pragma once

#include "jtri/matrix.hpp"

namespace jtri {

/// a = q * r, q unitary (m x m), r generalized upper-triangular (m x n)
/// with a real non-negative diagonal.
struct QrFactors {
    ComplexMatrix q;
    ComplexMatrix r;
};

/// a = t * q^H with t upper-triangular (positive real diagonal) and q unitary.
struct RqFactors {
    ComplexMatrix t;
    ComplexMatrix q;
};

/// Thin SVD: a = u * diag(sigma) * v^H with u (m x k), v (n x k), k = min(m, n).
struct SvdFactors {
    ComplexMatrix u;
    RealVector sigma;
    ComplexMatrix v;
};

/// a = vectors * diag(values) * vectors^H, values non-increasing.
struct HermitianEigen {
    RealVector values;
    ComplexMatrix vectors;
};

/// Householder QR. Works for any shape; the diagonal of r is real and >= 0.
QrFactors qr(const ComplexMatrix& a);

/// RQ of a square non-singular matrix, computed from the QR of the
/// exchange-permuted adjoint. Throws RankDeficient for singular input and
/// InvalidDimensions for non-square input.
RqFactors rq(const ComplexMatrix& a);

/// One-sided (Hestenes) Jacobi SVD. Singular values are sorted
/// non-increasingly; ties keep the original column order.
SvdFactors svd(const ComplexMatrix& a);

/// Singular values only.
RealVector singular_values(const ComplexMatrix& a);

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix. Only the upper
/// triangle is read.
HermitianEigen hermitian_eig(const ComplexMatrix& a);

/// ||a^H a - I||_F
double unitarity_error(const ComplexMatrix& a);

/// true iff a is square and ||a^H a - I||_F <= tol.
bool is_unitary(const ComplexMatrix& a, double tol);

/// Extends an m x k matrix with orthonormal columns to an m x m unitary
/// whose leading k columns are the input.
ComplexMatrix complete_unitary(const ComplexMatrix& orthonormal_columns);

/// Solves t * x = b for upper-triangular non-singular t.
ComplexMatrix solve_upper(const ComplexMatrix& t, const ComplexMatrix& b);

/// Inverse of a square non-singular matrix (via QR).
ComplexMatrix inverse(const ComplexMatrix& a);

/// log2 |det a| for square a (via QR). Returns -inf for singular input.
double log2_abs_det(const ComplexMatrix& a);

/// Hermitian positive semi-definite square root; eigenvalues in
/// [-clip, 0) are treated as zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, double clip = 1e-12);

/// Exchange (anti-identity) matrix.
ComplexMatrix exchange(std::size_t n);

} // namespace jtri
