#include "jtri/matcore.hpp"

#include "jtri/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace jtri {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 80;

Complex unit_phase(Complex z) {
    const double r = std::abs(z);
    return r > 0.0 ? z / r : Complex{1.0, 0.0};
}

double column_norm2(const ComplexMatrix& a, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        s += std::norm(a(i, j));
    }
    return s;
}

// [col p, col q] <- [col p, col q] * g, g given row-major as {g00, g01, g10, g11}
void rotate_columns(ComplexMatrix& a, std::size_t p, std::size_t q, const Complex (&g)[4]) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const Complex x = a(i, p);
        const Complex y = a(i, q);
        a(i, p) = x * g[0] + y * g[2];
        a(i, q) = x * g[1] + y * g[3];
    }
}

// [row p; row q] <- g^H * [row p; row q]
void rotate_rows_adjoint(ComplexMatrix& a, std::size_t p, std::size_t q, const Complex (&g)[4]) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const Complex x = a(p, j);
        const Complex y = a(q, j);
        a(p, j) = std::conj(g[0]) * x + std::conj(g[2]) * y;
        a(q, j) = std::conj(g[1]) * x + std::conj(g[3]) * y;
    }
}

// Real Jacobi rotation composed with the phase that makes the coupling
// term real and positive. `tau` is (second - first) / (2 |coupling|).
void jacobi_rotation(double tau, Complex phase, Complex (&g)[4]) {
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = c * t;
    const Complex cp = std::conj(phase);
    g[0] = c;
    g[1] = s;
    g[2] = -s * cp;
    g[3] = c * cp;
}

SvdFactors svd_tall(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ComplexMatrix w = a;
    ComplexMatrix v = ComplexMatrix::identity(n);

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = column_norm2(w, p);
                const double beta = column_norm2(w, q);
                Complex gamma{};
                for (std::size_t i = 0; i < m; ++i) {
                    gamma += std::conj(w(i, p)) * w(i, q);
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                Complex rot[4];
                jacobi_rotation((beta - alpha) / (2.0 * g), unit_phase(gamma), rot);
                rotate_columns(w, p, q, rot);
                rotate_columns(v, p, q, rot);
            }
        }
        if (!rotated) {
            break;
        }
    }

    RealVector sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        sigma[j] = std::sqrt(column_norm2(w, j));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdFactors out{ComplexMatrix(m, n), RealVector(n), ComplexMatrix(n, n)};
    std::vector<std::size_t> null_cols;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.sigma[k] = sigma[j];
        for (std::size_t i = 0; i < n; ++i) {
            out.v(i, k) = v(i, j);
        }
        if (sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) {
                out.u(i, k) = w(i, j) / sigma[j];
            }
        } else {
            null_cols.push_back(k);
        }
    }

    // exactly-zero singular values: fill u from an orthonormal completion
    if (!null_cols.empty()) {
        const std::size_t r = n - null_cols.size();
        ComplexMatrix basis = r > 0 ? complete_unitary(out.u.block(0, 0, m, r)) : ComplexMatrix::identity(m);
        for (std::size_t k = 0; k < null_cols.size(); ++k) {
            for (std::size_t i = 0; i < m; ++i) {
                out.u(i, null_cols[k]) = basis(i, r + k);
            }
        }
    }
    return out;
}

} // namespace

QrFactors qr(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ComplexMatrix r = a;
    ComplexMatrix q = ComplexMatrix::identity(m);
    const std::size_t steps = std::min(m, n);

    std::vector<Complex> v(m);
    for (std::size_t k = 0; k < steps; ++k) {
        if (k + 1 == m) {
            break;
        }
        double normx2 = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            normx2 += std::norm(r(i, k));
        }
        const double normx = std::sqrt(normx2);
        if (normx == 0.0) {
            continue;
        }
        const Complex alpha = -unit_phase(r(k, k)) * normx;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            v[i] = r(i, k);
        }
        v[k] -= alpha;
        for (std::size_t i = k; i < m; ++i) {
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) {
            continue;
        }
        const double beta = 2.0 / vnorm2;

        for (std::size_t j = k; j < n; ++j) {
            Complex s{};
            for (std::size_t i = k; i < m; ++i) {
                s += std::conj(v[i]) * r(i, j);
            }
            s *= beta;
            for (std::size_t i = k; i < m; ++i) {
                r(i, j) -= v[i] * s;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            Complex s{};
            for (std::size_t l = k; l < m; ++l) {
                s += q(i, l) * v[l];
            }
            s *= beta;
            for (std::size_t l = k; l < m; ++l) {
                q(i, l) -= s * std::conj(v[l]);
            }
        }
        r(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) {
            r(i, k) = 0.0;
        }
    }

    // absorb diagonal phases into q so diag(r) is real and non-negative
    for (std::size_t k = 0; k < steps; ++k) {
        const Complex d = r(k, k);
        if (std::abs(d) == 0.0) {
            continue;
        }
        const Complex ph = unit_phase(d);
        for (std::size_t j = k; j < n; ++j) {
            r(k, j) *= std::conj(ph);
        }
        for (std::size_t i = 0; i < m; ++i) {
            q(i, k) *= ph;
        }
        r(k, k) = std::abs(d);
    }
    return {std::move(q), std::move(r)};
}

RqFactors rq(const ComplexMatrix& a) {
    if (!a.is_square()) {
        throw InvalidDimensions("rq: square input required, got " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
    }
    const std::size_t n = a.rows();
    const ComplexMatrix j = exchange(n);
    auto [qp, rp] = qr(j * a.adjoint() * j);
    ComplexMatrix t = j * rp.adjoint() * j;
    ComplexMatrix q = j * qp * j;

    const double floor = static_cast<double>(n) * 1e-14 * a.frobenius_norm();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t(i, i).real() > floor)) {
            throw RankDeficient("rq: input is singular to working precision");
        }
        for (std::size_t k = 0; k < i; ++k) {
            t(i, k) = 0.0;
        }
    }
    return {std::move(t), std::move(q)};
}

SvdFactors svd(const ComplexMatrix& a) {
    if (a.rows() >= a.cols()) {
        return svd_tall(a);
    }
    SvdFactors t = svd_tall(a.adjoint());
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

RealVector singular_values(const ComplexMatrix& a) {
    return svd(a).sigma;
}

HermitianEigen hermitian_eig(const ComplexMatrix& a) {
    if (!a.is_square()) {
        throw InvalidDimensions("hermitian_eig: square input required");
    }
    const std::size_t n = a.rows();
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            h(i, j) = a(i, j);
            h(j, i) = std::conj(a(i, j));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = h.frobenius_norm();

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(h(p, q));
            }
        }
        if (off == 0.0 || std::sqrt(off) <= 0.5 * kEps * scale) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex b = h(p, q);
                const double g = std::abs(b);
                if (g == 0.0) {
                    continue;
                }
                Complex rot[4];
                jacobi_rotation((h(q, q).real() - h(p, p).real()) / (2.0 * g), unit_phase(b), rot);
                rotate_columns(h, p, q, rot);
                rotate_rows_adjoint(h, p, q, rot);
                rotate_columns(v, p, q, rot);
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
            }
        }
    }

    RealVector vals = h.real_diagonal();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return vals[x] > vals[y]; });
    HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = vals[order[k]];
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

double unitarity_error(const ComplexMatrix& a) {
    return distance(a.adjoint() * a, ComplexMatrix::identity(a.cols()));
}

bool is_unitary(const ComplexMatrix& a, double tol) {
    return a.is_square() && unitarity_error(a) <= tol;
}

ComplexMatrix complete_unitary(const ComplexMatrix& orthonormal_columns) {
    const std::size_t m = orthonormal_columns.rows();
    const std::size_t k = orthonormal_columns.cols();
    if (k > m) {
        throw InvalidDimensions("complete_unitary: more columns than rows");
    }
    if (k == m) {
        return orthonormal_columns;
    }
    const ComplexMatrix q = qr(orthonormal_columns).q;
    ComplexMatrix out = q;
    out.set_block(0, 0, orthonormal_columns);
    return out;
}

ComplexMatrix solve_upper(const ComplexMatrix& t, const ComplexMatrix& b) {
    if (!t.is_square() || t.rows() != b.rows()) {
        throw DimensionMismatch("solve_upper: incompatible shapes");
    }
    const std::size_t n = t.rows();
    ComplexMatrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            Complex s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) {
                s -= t(ii, k) * x(k, c);
            }
            if (t(ii, ii) == Complex{}) {
                throw RankDeficient("solve_upper: zero on the diagonal");
            }
            x(ii, c) = s / t(ii, ii);
        }
    }
    return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    if (!a.is_square()) {
        throw InvalidDimensions("inverse: square input required");
    }
    auto [q, r] = qr(a);
    const double floor = static_cast<double>(a.rows()) * kEps * a.frobenius_norm();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (!(r(i, i).real() > floor)) {
            throw RankDeficient("inverse: matrix is singular to working precision");
        }
    }
    return solve_upper(r, q.adjoint());
}

double log2_abs_det(const ComplexMatrix& a) {
    if (!a.is_square()) {
        throw InvalidDimensions("log2_abs_det: square input required");
    }
    const auto r = qr(a).r;
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        s += std::log2(r(i, i).real());
    }
    return s;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, double clip) {
    const auto eig = hermitian_eig(a);
    const std::size_t n = a.rows();
    const double top = eig.values.empty() ? 0.0 : std::max(1.0, std::abs(eig.values.front()));
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        double lam = eig.values[k];
        if (lam < -clip * top) {
            throw InvalidValue("psd_sqrt: matrix has eigenvalue " + std::to_string(lam));
        }
        const double root = std::sqrt(std::max(lam, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            scaled(i, k) *= root;
        }
    }
    return scaled * eig.vectors.adjoint();
}

ComplexMatrix exchange(std::size_t n) {
    ComplexMatrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        j(i, n - 1 - i) = 1.0;
    }
    return j;
}

} // namespace jtri
