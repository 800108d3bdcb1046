#pragma once

#include "jtri/decomp.hpp"
#include "jtri/multicast.hpp"

#include <array>
#include <string>
#include <vector>

namespace jtri {

/// Linear signal-to-distortion ratios of the two receivers. `param` records
/// what produced the point (power split gamma or covariance index).
struct SdrPoint {
    double sdr1 = 1.0;
    double sdr2 = 1.0;
    double param = 0.0;
};

struct SdrCurve {
    std::string scheme;
    std::vector<SdrPoint> points;
};

/// Non-dominated points, sorted by increasing sdr1 (so sdr2 is non-increasing).
std::vector<SdrPoint> pareto_frontier(const std::vector<SdrPoint>& points);

/// True if some point of `curve` dominates `p` up to `tol_bits` per user.
bool inside(const SdrPoint& p, const std::vector<SdrPoint>& curve, double tol_bits);

/// Two parallel bands: user i sees gain alpha_i on band A and beta_i on band B.
class TwoBandChannel {
public:
    TwoBandChannel(Complex alpha1, Complex beta1, Complex alpha2, Complex beta2, double p);

    [[nodiscard]] Complex alpha1() const noexcept { return a1_; }
    [[nodiscard]] Complex beta1() const noexcept { return b1_; }
    [[nodiscard]] Complex alpha2() const noexcept { return a2_; }
    [[nodiscard]] Complex beta2() const noexcept { return b2_; }
    [[nodiscard]] double power() const noexcept { return p_; }

    /// diag(alpha_i, beta_i) for both users.
    [[nodiscard]] ChannelPair pair() const;
    /// diag(gamma P, (1 - gamma) P)
    [[nodiscard]] InputCovariance covariance(double gamma) const;

private:
    Complex a1_;
    Complex b1_;
    Complex a2_;
    Complex b2_;
    double p_;
};

/// n evenly spaced points covering [0, 1].
RealVector uniform_grid(std::size_t n);

/// Covariances for the outer-bound sweep: the diagonal power-split family
/// for diagonal 2x2 pairs, otherwise weighted-sum optima, the max-min
/// optimum and the scaled identity.
std::vector<InputCovariance> covariance_family(const ChannelPair& pair, double p, std::size_t points);

/// (2^I(H_1,C), 2^I(H_2,C)) over the family; `param` is the family index.
SdrCurve sdr_outer_bound(const ChannelPair& pair, const std::vector<InputCovariance>& family);

/// Existence test for the hybrid digital-analog construction: the GSVs mu of
/// the augmented pair satisfy prod(mu) <= 1 <= prod(mu_1..mu_{N_t-1}), or the
/// swapped pair does when allow_swap is set.
bool hda_feasible(const ChannelPair& pair, const InputCovariance& cx, bool allow_swap);

struct HdaScheme {
    /// The construction used the pair with users exchanged.
    bool swapped = false;
    /// Diagonal ratio requested from the joint triangularization.
    PositiveVector ratio;
    double r_digital = 0.0;
    /// Per user, in the caller's order.
    std::array<double, 2> snr_analog{};
    SdrPoint point;
    /// max_i |log2 SDR_i - I(H_i, C)|
    double identity_error = 0.0;
    JointCheck check;
};

/// Throws NotFeasible if neither orientation satisfies the condition.
HdaScheme build_hda_scheme(const ChannelPair& pair, const InputCovariance& cx, bool allow_swap = true);

SdrPoint hda_achievable_point(const ChannelPair& pair, const InputCovariance& cx);

/// Analog transmission over a scalar broadcast channel refined by a digital
/// layer of rate r_digital: SDR_i = (1 + |h_i|^2 p) 2^r_digital.
SdrPoint proposition2_sdr(Complex h1, Complex h2, double p, double r_digital);

/// Length-2 spectrum with one entry >= 1 and one <= 1 (1e-12 slack). Zero
/// values count as <= 1, infinite ones as >= 1.
bool is_mixed(const GsvSpectrum& mu);

struct Lemma1Result {
    bool holds = false;
    bool input_mixed = false;
    bool augmented_mixed = false;
    /// det(F1^H F1 - F2^H F2) and det(G1^H G1 - G2^H G2), computed separately.
    double p1 = 0.0;
    double q1 = 0.0;
    /// |p1 - q1| relative to the scale of the Gram matrices.
    double identity_error = 0.0;
};

/// Checks that a mixed pair (H1, H2) stays mixed after augmentation with C.
Lemma1Result lemma1_check(const ComplexMatrix& h1, const ComplexMatrix& h2, const ComplexMatrix& c);

/// SDR_i = (1 + |alpha_i|^2 gamma P)(1 + |beta_i|^2 (1 - gamma) P) per grid point.
SdrCurve two_band_bound(const TwoBandChannel& ch, const RealVector& gamma_grid);

/// Neither user has the better gain on both bands.
bool two_band_antidegraded(const TwoBandChannel& ch);

struct Baselines {
    /// Time sharing, in the distortion domain, between the multicast point
    /// and the two single-user corners.
    SdrCurve separation;
    /// Digital on one band, analog on the other; the better assignment by
    /// sum of log SDRs is kept per gamma.
    SdrCurve naive_hda;
};

Baselines baselines(const TwoBandChannel& ch, const RealVector& gamma_grid);

} // namespace jtri
