#include "jtri/jscc.hpp"

#include "jtri/errors.hpp"
#include "jtri/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jtri {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kMixedSlack = 1e-12;

// prod(mu) <= 1 <= prod(mu_1..mu_{n-1}) in the log domain; mu sorted descending.
bool hda_condition(const PositiveVector& mu) {
    const double total = mu.log_product();
    const double head = total - std::log(mu[mu.size() - 1]);
    return total <= kFeasTol * std::max(1.0, std::abs(total)) && head >= -kFeasTol * std::max(1.0, std::abs(head));
}

Complex det2(const ComplexMatrix& a) {
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}

bool is_diagonal(const ComplexMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j && a(i, j) != Complex(0.0)) {
                return false;
            }
        }
    }
    return true;
}

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw InvalidValue("power split gamma must lie in [0, 1], got " + std::to_string(gamma));
    }
}

} // namespace

std::vector<SdrPoint> pareto_frontier(const std::vector<SdrPoint>& points) {
    std::vector<SdrPoint> sorted = points;
    std::stable_sort(sorted.begin(), sorted.end(), [](const SdrPoint& a, const SdrPoint& b) {
        return a.sdr1 != b.sdr1 ? a.sdr1 > b.sdr1 : a.sdr2 > b.sdr2;
    });
    std::vector<SdrPoint> front;
    double best2 = -std::numeric_limits<double>::infinity();
    for (const auto& p : sorted) {
        if (p.sdr2 > best2) {
            front.push_back(p);
            best2 = p.sdr2;
        }
    }
    std::reverse(front.begin(), front.end());
    return front;
}

bool inside(const SdrPoint& p, const std::vector<SdrPoint>& curve, double tol_bits) {
    return std::any_of(curve.begin(), curve.end(), [&](const SdrPoint& q) {
        return std::log2(p.sdr1) <= std::log2(q.sdr1) + tol_bits && std::log2(p.sdr2) <= std::log2(q.sdr2) + tol_bits;
    });
}

TwoBandChannel::TwoBandChannel(Complex alpha1, Complex beta1, Complex alpha2, Complex beta2, double p)
    : a1_(alpha1), b1_(beta1), a2_(alpha2), b2_(beta2), p_(p) {
    for (Complex g : {a1_, b1_, a2_, b2_}) {
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            throw InvalidValue("two-band gains must be finite");
        }
    }
    if (!(p_ >= 0.0) || !std::isfinite(p_)) {
        throw InvalidValue("power must be finite and >= 0");
    }
}

ChannelPair TwoBandChannel::pair() const {
    return {Channel(ComplexMatrix{{a1_, 0.0}, {0.0, b1_}}), Channel(ComplexMatrix{{a2_, 0.0}, {0.0, b2_}})};
}

InputCovariance TwoBandChannel::covariance(double gamma) const {
    check_gamma(gamma);
    return InputCovariance::diagonal({gamma * p_, (1.0 - gamma) * p_}, p_);
}

RealVector uniform_grid(std::size_t n) {
    if (n < 2) {
        throw InvalidValue("grid needs at least 2 points");
    }
    RealVector g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return g;
}

std::vector<InputCovariance> covariance_family(const ChannelPair& pair, double p, std::size_t points) {
    const std::size_t n = pair.num_tx();
    std::vector<InputCovariance> family;
    const RealVector grid = uniform_grid(points);
    if (n == 2 && pair.h1().h().is_square() && pair.h2().h().is_square() && is_diagonal(pair.h1().h()) &&
        is_diagonal(pair.h2().h())) {
        for (double g : grid) {
            family.push_back(InputCovariance::diagonal({g * p, (1.0 - g) * p}, p));
        }
        return family;
    }
    for (double w : grid) {
        family.push_back(optimize_weighted(pair, p, w));
    }
    family.push_back(optimize_covariance(pair, p).cx);
    family.push_back(InputCovariance::scaled_identity(n, p));
    return family;
}

SdrCurve sdr_outer_bound(const ChannelPair& pair, const std::vector<InputCovariance>& family) {
    SdrCurve curve{"outer_bound", {}};
    for (std::size_t k = 0; k < family.size(); ++k) {
        curve.points.push_back({std::exp2(mutual_information(pair.h1(), family[k])),
                                std::exp2(mutual_information(pair.h2(), family[k])), static_cast<double>(k)});
    }
    return curve;
}

bool hda_feasible(const ChannelPair& pair, const InputCovariance& cx, bool allow_swap) {
    const ComplexMatrix g1 = augment(pair.h1(), cx);
    const ComplexMatrix g2 = augment(pair.h2(), cx);
    if (hda_condition(gsv(g1, g2).as_positive())) {
        return true;
    }
    return allow_swap && hda_condition(gsv(g2, g1).as_positive());
}

HdaScheme build_hda_scheme(const ChannelPair& pair, const InputCovariance& cx, bool allow_swap) {
    for (int orientation = 0; orientation < (allow_swap ? 2 : 1); ++orientation) {
        const bool swapped = orientation == 1;
        const std::size_t a = swapped ? 1 : 0;
        const std::size_t b = 1 - a;
        const ComplexMatrix ga = augment(pair[a], cx);
        const ComplexMatrix gb = augment(pair[b], cx);
        const PositiveVector mu = gsv(ga, gb).as_positive();
        if (!hda_condition(mu)) {
            continue;
        }
        const std::size_t n = mu.size();
        RealVector r(n, 1.0);
        r[0] = std::exp(mu.log_product());
        HdaScheme s;
        s.swapped = swapped;
        s.ratio = PositiveVector(std::move(r));
        const JointTriangularization j = joint_triangularize(ga, gb, s.ratio);
        s.check = verify_joint(ga, gb, j, &s.ratio);

        for (std::size_t k = 1; k < n; ++k) {
            s.r_digital += 2.0 * std::log2(j.t1(k, k).real());
        }
        const std::array<double, 2> lead{j.t1(0, 0).real(), j.t2(0, 0).real()};
        std::array<double, 2> log_sdr{};
        for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t user = i == 0 ? a : b;
            s.snr_analog[user] = lead[i] * lead[i] - 1.0;
            log_sdr[user] = std::log2(1.0 + s.snr_analog[user]) + s.r_digital;
        }
        s.point = {std::exp2(log_sdr[0]), std::exp2(log_sdr[1]), 0.0};
        s.identity_error = std::max(std::abs(log_sdr[0] - mutual_information(pair.h1(), cx)),
                                    std::abs(log_sdr[1] - mutual_information(pair.h2(), cx)));
        return s;
    }
    throw NotFeasible("hybrid digital-analog construction: GSV condition fails" +
                      std::string(allow_swap ? " in both user orders" : ""));
}

SdrPoint hda_achievable_point(const ChannelPair& pair, const InputCovariance& cx) {
    return build_hda_scheme(pair, cx, true).point;
}

SdrPoint proposition2_sdr(Complex h1, Complex h2, double p, double r_digital) {
    if (!(p >= 0.0) || !(r_digital >= 0.0)) {
        throw InvalidValue("proposition2_sdr: power and digital rate must be >= 0");
    }
    const double scale = std::exp2(r_digital);
    return {(1.0 + std::norm(h1) * p) * scale, (1.0 + std::norm(h2) * p) * scale, r_digital};
}

bool is_mixed(const GsvSpectrum& mu) {
    if (mu.size() != 2) {
        throw InvalidDimensions("is_mixed: spectrum must have length 2, got " + std::to_string(mu.size()));
    }
    RealVector full(mu.infinite_count, std::numeric_limits<double>::infinity());
    full.insert(full.end(), mu.values.begin(), mu.values.end());
    full.resize(2, 0.0);
    return full[0] >= 1.0 - kMixedSlack && full[1] <= 1.0 + kMixedSlack;
}

Lemma1Result lemma1_check(const ComplexMatrix& h1, const ComplexMatrix& h2, const ComplexMatrix& c) {
    if (h1.cols() != 2 || h2.cols() != 2 || c.rows() != 2 || !c.is_square()) {
        throw InvalidDimensions("lemma1_check: two-column channels and a 2x2 covariance are required");
    }
    const ComplexMatrix root = psd_sqrt(c);
    const ComplexMatrix f1 = h1 * root;
    const ComplexMatrix f2 = h2 * root;
    const ComplexMatrix g1 = vstack(f1, ComplexMatrix::identity(2));
    const ComplexMatrix g2 = vstack(f2, ComplexMatrix::identity(2));

    Lemma1Result res;
    res.input_mixed = is_mixed(gsv(h1, h2));
    res.augmented_mixed = is_mixed(gsv(g1, g2));
    res.holds = !res.input_mixed || res.augmented_mixed;

    const ComplexMatrix q1 = g1.adjoint() * g1;
    const ComplexMatrix q2 = g2.adjoint() * g2;
    res.p1 = det2(f1.adjoint() * f1 - f2.adjoint() * f2).real();
    res.q1 = det2(q1 - q2).real();
    const double scale = std::max(q1.frobenius_norm(), q2.frobenius_norm());
    res.identity_error = std::abs(res.p1 - res.q1) / std::max({scale * scale, std::abs(res.p1), 1e-300});
    return res;
}

SdrCurve two_band_bound(const TwoBandChannel& ch, const RealVector& gamma_grid) {
    SdrCurve curve{"outer_bound", {}};
    const double p = ch.power();
    for (double g : gamma_grid) {
        check_gamma(g);
        curve.points.push_back({(1.0 + std::norm(ch.alpha1()) * g * p) * (1.0 + std::norm(ch.beta1()) * (1.0 - g) * p),
                                (1.0 + std::norm(ch.alpha2()) * g * p) * (1.0 + std::norm(ch.beta2()) * (1.0 - g) * p),
                                g});
    }
    return curve;
}

bool two_band_antidegraded(const TwoBandChannel& ch) {
    const double a1 = std::norm(ch.alpha1());
    const double a2 = std::norm(ch.alpha2());
    const double b1 = std::norm(ch.beta1());
    const double b2 = std::norm(ch.beta2());
    return (a1 >= a2 && b1 <= b2) || (a1 <= a2 && b1 >= b2);
}

Baselines baselines(const TwoBandChannel& ch, const RealVector& gamma_grid) {
    Baselines out{{"separation_timeshare", {}}, {"naive_hda", {}}};
    const double p = ch.power();
    const ChannelPair pair = ch.pair();
    for (double g : gamma_grid) {
        check_gamma(g);
        const std::array<double, 2> snr_a{std::norm(ch.alpha1()) * g * p, std::norm(ch.alpha2()) * g * p};
        const std::array<double, 2> snr_b{std::norm(ch.beta1()) * (1.0 - g) * p,
                                          std::norm(ch.beta2()) * (1.0 - g) * p};

        // digital on band A with analog on B, and the reverse
        SdrPoint best;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int assignment = 0; assignment < 2; ++assignment) {
            const auto& digital = assignment == 0 ? snr_a : snr_b;
            const auto& analog = assignment == 0 ? snr_b : snr_a;
            const double scale = 1.0 + std::min(digital[0], digital[1]);
            const SdrPoint pt{(1.0 + analog[0]) * scale, (1.0 + analog[1]) * scale, g};
            const double score = std::log2(pt.sdr1) + std::log2(pt.sdr2);
            if (score > best_score) {
                best_score = score;
                best = pt;
            }
        }
        out.naive_hda.points.push_back(best);

        const InputCovariance cx = ch.covariance(g);
        const double i1 = mutual_information(pair.h1(), cx);
        const double i2 = mutual_information(pair.h2(), cx);
        const double mc = std::min(i1, i2);
        const std::array<std::array<double, 2>, 3> corners{{{std::exp2(-i1), 1.0},
                                                             {std::exp2(-mc), std::exp2(-mc)},
                                                             {1.0, std::exp2(-i2)}}};
        for (std::size_t seg = 0; seg < 2; ++seg) {
            for (int k = seg == 0 ? 0 : 1; k <= 10; ++k) {
                const double lam = k / 10.0;
                const double d1 = (1.0 - lam) * corners[seg][0] + lam * corners[seg + 1][0];
                const double d2 = (1.0 - lam) * corners[seg][1] + lam * corners[seg + 1][1];
                out.separation.points.push_back({1.0 / d1, 1.0 / d2, g});
            }
        }
    }
    return out;
}

} // namespace jtri
