#include "jtri/mimolink.hpp"

#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace jtri {

namespace {

constexpr double kFactorTol = 1e-8;

} // namespace

InputCovariance::InputCovariance(ComplexMatrix c, double power) : c_(std::move(c)), power_(power) {
    if (!c_.is_square()) {
        throw InvalidDimensions("input covariance must be square");
    }
    if (!(power_ >= 0.0) || !std::isfinite(power_)) {
        throw InvalidValue("power budget must be finite and >= 0");
    }
    const double scale = std::max(1.0, c_.frobenius_norm());
    if (distance(c_, c_.adjoint()) > 1e-10 * scale) {
        throw InvalidValue("input covariance is not Hermitian");
    }
    c_ = Complex(0.5) * (c_ + c_.adjoint());
    const auto e = hermitian_eig(c_);
    if (e.values.back() < -1e-12 * std::max(1.0, e.values.front())) {
        throw InvalidValue("input covariance is not positive semi-definite");
    }
    if (trace() > power_ * (1.0 + 1e-9) + 1e-15) {
        throw InvalidValue("input covariance trace " + std::to_string(trace()) + " exceeds power " +
                           std::to_string(power_));
    }
}

InputCovariance InputCovariance::scaled_identity(std::size_t n, double power) {
    return {Complex(power / static_cast<double>(n)) * ComplexMatrix::identity(n), power};
}

InputCovariance InputCovariance::diagonal(const RealVector& d, double power) {
    return {ComplexMatrix::diagonal(d), power};
}

double InputCovariance::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < c_.rows(); ++i) {
        t += c_(i, i).real();
    }
    return t;
}

double mutual_information(const Channel& ch, const InputCovariance& cx) {
    if (ch.num_tx() != cx.size()) {
        throw DimensionMismatch("mutual_information: channel has " + std::to_string(ch.num_tx()) +
                                " inputs, covariance is " + std::to_string(cx.size()) + "x" +
                                std::to_string(cx.size()));
    }
    const auto& h = ch.h();
    const ComplexMatrix m = ComplexMatrix::identity(h.rows()) + h * cx.c() * h.adjoint();
    return std::max(0.0, log2_abs_det(m));
}

ComplexMatrix augment(const Channel& ch, const InputCovariance& cx) {
    if (ch.num_tx() != cx.size()) {
        throw DimensionMismatch("augment: channel and covariance sizes differ");
    }
    return vstack(ch.h() * psd_sqrt(cx.c()), ComplexMatrix::identity(ch.num_tx()));
}

SicScheme build_sic_scheme(const Channel& ch, const InputCovariance& cx, const GtdFactors& g) {
    const std::size_t nt = ch.num_tx();
    const std::size_t nr = ch.num_rx();
    const ComplexMatrix a = augment(ch, cx);
    if (g.u.rows() != nr + nt || !g.u.is_square() || g.t.rows() != nr + nt || g.t.cols() != nt ||
        g.v.rows() != nt || !g.v.is_square()) {
        throw InconsistentFactors("build_sic_scheme: factor shapes do not match the augmented matrix");
    }
    if (relative_distance(a, g.u * g.t * g.v.adjoint()) > kFactorTol) {
        throw InconsistentFactors("build_sic_scheme: factors do not reconstruct the augmented matrix");
    }
    const RealVector d = g.t.real_diagonal();
    for (std::size_t j = 0; j < nt; ++j) {
        if (!(d[j] > 0.0)) {
            throw InconsistentFactors("build_sic_scheme: triangular factor needs a positive diagonal");
        }
    }

    SicScheme s{g.v, g.u.block(0, 0, nr, nt), ComplexMatrix(nt, nt), ComplexMatrix(nt, nt), {}, {}};
    const ComplexMatrix f = a.block(0, 0, nr, nt);
    s.t_tilde = s.w.adjoint() * f * g.v;
    s.c_ztilde = s.w.adjoint() * s.w;
    for (std::size_t j = 0; j < nt; ++j) {
        s.rates.push_back(2.0 * std::log2(d[j]));
        double denom = s.c_ztilde(j, j).real();
        for (std::size_t l = 0; l < j; ++l) {
            denom += std::norm(s.t_tilde(j, l));
        }
        const double num = std::norm(s.t_tilde(j, j));
        s.sinrs.push_back(denom > 0.0 ? num / denom : 0.0);
    }
    return s;
}

SicScheme build_sic_scheme(const Channel& ch, const InputCovariance& cx) {
    return build_sic_scheme(ch, cx, gmd(augment(ch, cx)));
}

SicSimulation simulate_sic(const SicScheme& scheme, const Channel& ch, const InputCovariance& cx,
                           std::size_t num_symbols, std::uint64_t seed) {
    if (num_symbols == 0) {
        throw InvalidValue("simulate_sic: num_symbols must be >= 1");
    }
    const std::size_t nt = ch.num_tx();
    const std::size_t nr = ch.num_rx();
    const ComplexMatrix precoder = psd_sqrt(cx.c()) * scheme.v;
    const ComplexMatrix front = scheme.w.adjoint();
    const ComplexMatrix& tt = scheme.t_tilde;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<Complex> xt(nt);
    std::vector<Complex> x(nt);
    std::vector<Complex> y(nr);
    std::vector<Complex> yt(nt);
    RealVector sig(nt, 0.0);
    RealVector sig2(nt, 0.0);
    RealVector err(nt, 0.0);
    RealVector err2(nt, 0.0);

    for (std::size_t k = 0; k < num_symbols; ++k) {
        for (auto& v : xt) {
            v = Complex(gauss(rng), gauss(rng));
        }
        for (std::size_t i = 0; i < nt; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                acc += precoder(i, j) * xt[j];
            }
            x[i] = acc;
        }
        for (std::size_t i = 0; i < nr; ++i) {
            Complex acc(gauss(rng), gauss(rng));
            for (std::size_t j = 0; j < nt; ++j) {
                acc += ch.h()(i, j) * x[j];
            }
            y[i] = acc;
        }
        for (std::size_t i = 0; i < nt; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < nr; ++j) {
                acc += front(i, j) * y[j];
            }
            yt[i] = acc;
        }
        // stream j sees streams l < j as interference; l >= j are known to the genie
        for (std::size_t j = 0; j < nt; ++j) {
            Complex e = yt[j];
            for (std::size_t l = j; l < nt; ++l) {
                e -= tt(j, l) * xt[l];
            }
            const double ps = std::norm(xt[j]);
            const double pe = std::norm(e);
            sig[j] += ps;
            sig2[j] += ps * ps;
            err[j] += pe;
            err2[j] += pe * pe;
        }
    }

    const double n = static_cast<double>(num_symbols);
    SicSimulation out;
    for (std::size_t j = 0; j < nt; ++j) {
        const double ms = sig[j] / n;
        const double me = err[j] / n;
        const double gain = std::norm(tt(j, j));
        if (!(me > 0.0) || gain == 0.0) {
            out.sinrs.push_back(0.0);
            out.std_errors.push_back(0.0);
            continue;
        }
        const double s = gain * ms / me;
        const double vs = std::max(0.0, sig2[j] / n - ms * ms) / (n * ms * ms);
        const double ve = std::max(0.0, err2[j] / n - me * me) / (n * me * me);
        out.sinrs.push_back(s);
        out.std_errors.push_back(s * std::sqrt(vs + ve));
    }
    return out;
}

RealVector block_rates(const ComplexMatrix& t, const std::vector<std::size_t>& sizes) {
    const std::size_t n = t.cols();
    std::size_t total = 0;
    for (std::size_t s : sizes) {
        if (s == 0) {
            throw InvalidBlockSpec("block_rates: block sizes must be positive");
        }
        total += s;
    }
    if (total != n || t.rows() < n) {
        throw InvalidBlockSpec("block_rates: block sizes sum to " + std::to_string(total) + " but T has " +
                               std::to_string(n) + " columns");
    }
    const double tol = 1e-12 * std::max(t.frobenius_norm(), 1e-300);
    std::vector<std::size_t> block_of(n);
    std::size_t col = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        for (std::size_t c = 0; c < sizes[k]; ++c) {
            block_of[col++] = k;
        }
    }
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool below = i >= n || block_of[i] > block_of[j];
            if (below && std::abs(t(i, j)) > tol) {
                throw InvalidBlockSpec("block_rates: T is not block upper-triangular for this partition");
            }
        }
    }
    RealVector rates;
    std::size_t start = 0;
    for (std::size_t s : sizes) {
        rates.push_back(2.0 * log2_abs_det(t.block(start, start, s, s)));
        start += s;
    }
    return rates;
}

} // namespace jtri
