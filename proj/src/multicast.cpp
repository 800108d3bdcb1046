#include "jtri/multicast.hpp"

#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace jtri {

namespace {

struct Evaluation {
    double i1 = 0.0;
    double i2 = 0.0;
    [[nodiscard]] double objective() const { return std::min(i1, i2); }
};

double mi(const ComplexMatrix& h, const ComplexMatrix& c) {
    return std::max(0.0, log2_abs_det(ComplexMatrix::identity(h.rows()) + h * c * h.adjoint()));
}

// d/dC log2 det(I + H C H^H)
ComplexMatrix mi_gradient(const ComplexMatrix& h, const ComplexMatrix& c) {
    const ComplexMatrix k = inverse(ComplexMatrix::identity(h.rows()) + h * c * h.adjoint());
    ComplexMatrix g = Complex(1.0 / std::numbers::ln2) * (h.adjoint() * k * h);
    return Complex(0.5) * (g + g.adjoint());
}

Evaluation evaluate(const ChannelPair& pair, const ComplexMatrix& c) {
    return {mi(pair.h1().h(), c), mi(pair.h2().h(), c)};
}

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    double s = 0.0;
    const auto ea = a.entries();
    const auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        s += (std::conj(ea[i]) * eb[i]).real();
    }
    return s;
}

// Euclidean projection onto {C >= 0, tr C <= p}.
ComplexMatrix project(const ComplexMatrix& c, double p) {
    const auto e = hermitian_eig(Complex(0.5) * (c + c.adjoint()));
    RealVector lam = e.values;
    for (auto& l : lam) {
        l = std::max(l, 0.0);
    }
    double total = 0.0;
    for (double l : lam) {
        total += l;
    }
    if (total > p) {
        // water level theta with sum max(l - theta, 0) = p; lam is sorted descending
        double theta = 0.0;
        double prefix = 0.0;
        for (std::size_t k = 0; k < lam.size(); ++k) {
            prefix += lam[k];
            const double candidate = (prefix - p) / static_cast<double>(k + 1);
            if (k + 1 == lam.size() || candidate >= lam[k + 1]) {
                theta = candidate;
                break;
            }
        }
        for (auto& l : lam) {
            l = std::max(l - theta, 0.0);
        }
    }
    ComplexMatrix out = e.vectors * ComplexMatrix::diagonal(lam) * e.vectors.adjoint();
    return Complex(0.5) * (out + out.adjoint());
}

// Maximizes w I1 + (1 - w) I2 by projected gradient ascent with backtracking.
ComplexMatrix solve_weighted(const ChannelPair& pair, double p, double w, ComplexMatrix c, std::size_t iters) {
    const auto& h1 = pair.h1().h();
    const auto& h2 = pair.h2().h();
    auto f = [&](const ComplexMatrix& x) { return w * mi(h1, x) + (1.0 - w) * mi(h2, x); };
    double fc = f(c);
    double step = 1.0;
    for (std::size_t it = 0; it < iters; ++it) {
        const ComplexMatrix g = Complex(w) * mi_gradient(h1, c) + Complex(1.0 - w) * mi_gradient(h2, c);
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            const ComplexMatrix next = project(c + Complex(step) * g, p);
            const ComplexMatrix d = next - c;
            const double dd = inner(d, d);
            const double fn = f(next);
            if (fn >= fc + inner(g, d) - dd / (2.0 * step)) {
                moved = dd > 1e-28 * std::max(1.0, p * p);
                c = next;
                fc = fn;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            break;
        }
    }
    return c;
}

struct Candidate {
    ComplexMatrix c;
    Evaluation e;
};

void consider(Candidate& best, const ChannelPair& pair, const ComplexMatrix& c) {
    const Evaluation e = evaluate(pair, c);
    if (e.objective() > best.e.objective()) {
        best = {c, e};
    }
}

// Golden-section maximum of the concave map t -> min_i I_i((1 - t) a + t b).
void segment_search(Candidate& best, const ChannelPair& pair, const ComplexMatrix& a, const ComplexMatrix& b) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    auto at = [&](double t) { return Complex(1.0 - t) * a + Complex(t) * b; };
    double lo = 0.0;
    double hi = 1.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = evaluate(pair, at(x1)).objective();
    double f2 = evaluate(pair, at(x2)).objective();
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = evaluate(pair, at(x2)).objective();
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = evaluate(pair, at(x1)).objective();
        }
    }
    consider(best, pair, at(0.5 * (lo + hi)));
}

// Dual search over the weight w; returns the smallest dual value seen.
double polish(Candidate& best, const ChannelPair& pair, double p) {
    struct Point {
        double w;
        ComplexMatrix c;
        Evaluation e;
    };
    std::vector<Point> seen;
    ComplexMatrix warm = best.c;
    auto dual = [&](double w) {
        warm = solve_weighted(pair, p, w, warm, 500);
        const Evaluation e = evaluate(pair, warm);
        seen.push_back({w, warm, e});
        consider(best, pair, warm);
        return w * e.i1 + (1.0 - w) * e.i2;
    };

    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = 1.0;
    double bound = std::min(dual(0.0), dual(1.0));
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double g1 = dual(x1);
    double g2 = dual(x2);
    for (int it = 0; it < 45; ++it) {
        if (g1 > g2) {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = dual(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = dual(x1);
        }
    }
    bound = std::min({bound, g1, g2});

    // primal recovery between the closest maximizers on either side of I1 = I2
    const Point* above = nullptr;
    const Point* below = nullptr;
    const double w_star = 0.5 * (lo + hi);
    for (const auto& pt : seen) {
        const bool first_larger = pt.e.i1 >= pt.e.i2;
        const Point*& slot = first_larger ? above : below;
        if (slot == nullptr || std::abs(pt.w - w_star) < std::abs(slot->w - w_star)) {
            slot = &pt;
        }
    }
    if (above != nullptr && below != nullptr) {
        segment_search(best, pair, above->c, below->c);
    }
    return bound;
}

void diagonal_grid(Candidate& best, const ChannelPair& pair, double p, std::size_t n, std::size_t steps) {
    if (n == 1) {
        consider(best, pair, ComplexMatrix::diagonal(RealVector{p}));
        return;
    }
    if (n == 2) {
        for (std::size_t k = 0; k <= steps; ++k) {
            const double g = static_cast<double>(k) / static_cast<double>(steps);
            consider(best, pair, ComplexMatrix::diagonal(RealVector{g * p, (1.0 - g) * p}));
        }
        return;
    }
    const std::size_t s = std::min<std::size_t>(steps, 60);
    for (std::size_t a = 0; a <= s; ++a) {
        for (std::size_t b = 0; a + b <= s; ++b) {
            const double x = static_cast<double>(a) / static_cast<double>(s);
            const double y = static_cast<double>(b) / static_cast<double>(s);
            consider(best, pair, ComplexMatrix::diagonal(RealVector{x * p, y * p, (1.0 - x - y) * p}));
        }
    }
}

void throw_if_invalid_power(double p) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw InvalidValue("power budget must be finite and >= 0");
    }
}

} // namespace

ChannelPair::ChannelPair(Channel h1, Channel h2) : h1_(std::move(h1)), h2_(std::move(h2)) {
    if (h1_.num_tx() != h2_.num_tx()) {
        throw DimensionMismatch("channel pair: input counts " + std::to_string(h1_.num_tx()) + " and " +
                                std::to_string(h2_.num_tx()) + " differ");
    }
}

double compound_mi(const ChannelPair& pair, const InputCovariance& cx) {
    return std::min(mutual_information(pair.h1(), cx), mutual_information(pair.h2(), cx));
}

CovarianceOptimum optimize_covariance(const ChannelPair& pair, double p, const OptimizerOptions& opts) {
    throw_if_invalid_power(p);
    const std::size_t n = pair.num_tx();
    if (p == 0.0) {
        return {InputCovariance(ComplexMatrix(n, n), 0.0), 0.0, 0.0, true, 0};
    }

    ComplexMatrix c = Complex(p / static_cast<double>(n)) * ComplexMatrix::identity(n);
    Candidate best{c, evaluate(pair, c)};
    std::size_t iterations = 0;
    for (std::size_t k = 1; k <= opts.max_iterations; ++k) {
        iterations = k;
        const Evaluation e = evaluate(pair, c);
        ComplexMatrix g(n, n);
        if (std::abs(e.i1 - e.i2) <= 1e-9) {
            g = Complex(0.5) * (mi_gradient(pair.h1().h(), c) + mi_gradient(pair.h2().h(), c));
        } else {
            g = mi_gradient((e.i1 < e.i2 ? pair.h1() : pair.h2()).h(), c);
        }
        const double gn = g.frobenius_norm() * std::sqrt(static_cast<double>(n * n));
        if (!(gn > 0.0)) {
            break;
        }
        c = project(c + Complex(p / (gn * std::sqrt(static_cast<double>(k)))) * g, p);
        consider(best, pair, c);
    }

    double bound = std::numeric_limits<double>::infinity();
    if (opts.polish) {
        bound = polish(best, pair, p);
    }
    if (n <= 3 && opts.grid_steps > 0) {
        diagonal_grid(best, pair, p, n, opts.grid_steps);
    }

    CovarianceOptimum out{InputCovariance(project(best.c, p), p), 0.0, 0.0, false, iterations};
    out.objective = compound_mi(pair, out.cx);
    if (std::isfinite(bound)) {
        out.dual_gap = std::max(0.0, bound - out.objective);
        out.converged = out.dual_gap <= opts.gap_tol;
    }
    return out;
}

InputCovariance optimize_weighted(const ChannelPair& pair, double p, double w) {
    throw_if_invalid_power(p);
    if (!(w >= 0.0 && w <= 1.0)) {
        throw InvalidValue("optimize_weighted: weight must lie in [0, 1]");
    }
    const std::size_t n = pair.num_tx();
    const ComplexMatrix start = Complex(p / static_cast<double>(n)) * ComplexMatrix::identity(n);
    return {p == 0.0 ? start : solve_weighted(pair, p, w, start, 500), p};
}

MulticastScheme build_multicast_scheme(const ChannelPair& pair, const InputCovariance& cx,
                                       const std::optional<PositiveVector>& ratio) {
    const double i1 = mutual_information(pair.h1(), cx);
    const double i2 = mutual_information(pair.h2(), cx);
    const std::size_t weaker = i1 >= i2 ? 1 : 0;
    const std::size_t stronger = 1 - weaker;

    const ComplexMatrix gs = augment(pair[stronger], cx);
    const ComplexMatrix gw = augment(pair[weaker], cx);
    JointTriangularization j = ratio ? joint_triangularize(gs, gw, *ratio) : joint_equal_ratio(gs, gw);

    SicScheme strong = build_sic_scheme(pair[stronger], cx, GtdFactors{j.u1, j.t1, j.v});
    SicScheme weak = build_sic_scheme(pair[weaker], cx, GtdFactors{j.u2, j.t2, j.v});
    std::array<SicScheme, 2> users = weaker == 1 ? std::array<SicScheme, 2>{std::move(strong), std::move(weak)}
                                                 : std::array<SicScheme, 2>{std::move(weak), std::move(strong)};

    MulticastScheme s{pair, cx, j.v, std::move(users), weaker, std::move(j.ratio), {}, 0.0};
    s.common_rates = s.users[weaker].rates;
    for (double r : s.common_rates) {
        s.total_rate += r;
    }
    return s;
}

MulticastReport verify_multicast(const MulticastScheme& scheme, double tol) {
    MulticastReport rep;
    rep.unitarity_v = unitarity_error(scheme.v);
    const std::size_t n = scheme.common_rates.size();
    auto chain = [&](std::size_t i) {
        auto f = qr(augment(scheme.pair[i], scheme.cx) * scheme.v);
        return build_sic_scheme(scheme.pair[i], scheme.cx, GtdFactors{f.q, f.r, scheme.v});
    };
    std::vector<SicScheme> chains;
    try {
        chains.push_back(chain(0));
        chains.push_back(chain(1));
    } catch (const Error&) {
        rep.passed = false;
        rep.dominance_violation = std::numeric_limits<double>::infinity();
        rep.equality_violation = std::numeric_limits<double>::infinity();
        return rep;
    }

    const SicScheme& strong = chains[1 - scheme.weaker];
    const SicScheme& weak = chains[scheme.weaker];
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double rate = scheme.common_rates[j];
        rep.streams.push_back({rate, strong.sinrs[j], weak.sinrs[j]});
        const double dom = std::max(0.0, rate - std::log2(1.0 + strong.sinrs[j]));
        const double eq = std::abs(std::log2(1.0 + weak.sinrs[j]) - rate);
        rep.dominance_violation = std::max(rep.dominance_violation, dom);
        rep.equality_violation = std::max(rep.equality_violation, eq);
        if (std::max(dom, eq) > tol && std::max(dom, eq) > worst) {
            worst = std::max(dom, eq);
            rep.failing_stream = j;
        }
    }
    rep.passed = !rep.failing_stream.has_value();
    return rep;
}

} // namespace jtri
