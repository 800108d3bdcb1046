#pragma once

#include "jtri/mimolink.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace jtri {

/// Two receivers of a common transmitter.
class ChannelPair {
public:
    /// Throws DimensionMismatch unless both channels have the same number of inputs.
    ChannelPair(Channel h1, Channel h2);

    [[nodiscard]] const Channel& h1() const noexcept { return h1_; }
    [[nodiscard]] const Channel& h2() const noexcept { return h2_; }
    [[nodiscard]] const Channel& operator[](std::size_t i) const { return i == 0 ? h1_ : h2_; }
    [[nodiscard]] std::size_t num_tx() const noexcept { return h1_.num_tx(); }
    [[nodiscard]] ChannelPair swapped() const { return {h2_, h1_}; }

private:
    Channel h1_;
    Channel h2_;
};

/// min_i I(H_i, C)
double compound_mi(const ChannelPair& pair, const InputCovariance& cx);

struct OptimizerOptions {
    std::size_t max_iterations = 2000;
    /// Refine with a dual (weighted-sum) search after the supergradient phase.
    bool polish = true;
    /// Diagonal-covariance grid cross-check, used when N_t <= 3.
    std::size_t grid_steps = 200;
    double gap_tol = 1e-6;
};

struct CovarianceOptimum {
    InputCovariance cx;
    double objective = 0.0;
    /// Weak-duality upper bound minus objective (only meaningful with polish).
    double dual_gap = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Maximizes min_i I(H_i, C) over C >= 0, tr C <= p. Never throws on
/// non-convergence; the best iterate is returned with `converged` false.
CovarianceOptimum optimize_covariance(const ChannelPair& pair, double p, const OptimizerOptions& opts = {});

/// Maximizes w I(H_1, C) + (1 - w) I(H_2, C) over C >= 0, tr C <= p.
InputCovariance optimize_weighted(const ChannelPair& pair, double p, double w);

/// Common-message scheme: both users decode every stream with SIC, using a
/// shared precoder V from a joint triangularization of the augmented matrices.
struct MulticastScheme {
    ChannelPair pair;
    InputCovariance cx;
    ComplexMatrix v;
    /// Per-user schemes, in the caller's user order.
    std::array<SicScheme, 2> users;
    /// Index (0 or 1) of the user with the smaller mutual information.
    std::size_t weaker = 1;
    /// Realized diagonal ratio, stronger over weaker.
    PositiveVector ratio;
    RealVector common_rates;
    double total_rate = 0.0;
};

/// Orders users by mutual information internally. `ratio` defaults to the
/// uniform (geometric-mean) ratio; a custom one must be feasible.
MulticastScheme build_multicast_scheme(const ChannelPair& pair, const InputCovariance& cx,
                                       const std::optional<PositiveVector>& ratio = std::nullopt);

struct MulticastStream {
    double rate = 0.0;
    double sinr_stronger = 0.0;
    double sinr_weaker = 0.0;
};

struct MulticastReport {
    bool passed = false;
    std::vector<MulticastStream> streams;
    /// max_j max(0, rate_j - log2(1 + S_stronger,j))
    double dominance_violation = 0.0;
    /// max_j |log2(1 + S_weaker,j) - rate_j|
    double equality_violation = 0.0;
    double unitarity_v = 0.0;
    /// Stream with the largest violation, if any exceeds the tolerance.
    std::optional<std::size_t> failing_stream;
};

/// Recomputes both users' SIC chains from the scheme's precoder and checks
/// them against the codebook rates.
MulticastReport verify_multicast(const MulticastScheme& scheme, double tol = 1e-8);

} // namespace jtri
