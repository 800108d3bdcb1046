#pragma once

#include "jtri/decomp.hpp"
#include "jtri/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace jtri {

/// y = H x + z with unit-covariance complex Gaussian noise z.
class Channel {
public:
    explicit Channel(ComplexMatrix h) : h_(std::move(h)) {}

    [[nodiscard]] const ComplexMatrix& h() const noexcept { return h_; }
    [[nodiscard]] std::size_t num_tx() const noexcept { return h_.cols(); }
    [[nodiscard]] std::size_t num_rx() const noexcept { return h_.rows(); }

private:
    ComplexMatrix h_;
};

/// Hermitian PSD input covariance with trace at most `power`.
class InputCovariance {
public:
    /// Throws InvalidValue if c is not Hermitian, not PSD or exceeds the budget.
    InputCovariance(ComplexMatrix c, double power);

    static InputCovariance scaled_identity(std::size_t n, double power);
    static InputCovariance diagonal(const RealVector& d, double power);

    [[nodiscard]] const ComplexMatrix& c() const noexcept { return c_; }
    [[nodiscard]] double power() const noexcept { return power_; }
    [[nodiscard]] std::size_t size() const noexcept { return c_.rows(); }
    [[nodiscard]] double trace() const;

private:
    ComplexMatrix c_;
    double power_;
};

/// SIC transmission built from a unitary triangularization of the augmented
/// matrix G = [H C^1/2; I] = U T V^H.
struct SicScheme {
    ComplexMatrix v;
    /// Upper-left N_r x N_t block of U.
    ComplexMatrix w;
    /// W^H F V
    ComplexMatrix t_tilde;
    /// W^H W, the covariance of W^H z.
    ComplexMatrix c_ztilde;
    RealVector rates;
    RealVector sinrs;
};

/// log2 det(I + H C H^H)
double mutual_information(const Channel& ch, const InputCovariance& cx);

/// [H C^1/2; I_Nt]
ComplexMatrix augment(const Channel& ch, const InputCovariance& cx);

/// Throws InconsistentFactors if `g` does not decompose augment(ch, cx).
SicScheme build_sic_scheme(const Channel& ch, const InputCovariance& cx, const GtdFactors& g);

/// Convenience: build_sic_scheme on the GMD of the augmented matrix.
SicScheme build_sic_scheme(const Channel& ch, const InputCovariance& cx);

struct SicSimulation {
    RealVector sinrs;
    /// Delta-method standard error of each estimate.
    RealVector std_errors;
};

/// Monte Carlo estimate of the per-stream SINRs under genie-aided SIC.
/// Streams are unit-variance complex Gaussian.
SicSimulation simulate_sic(const SicScheme& scheme, const Channel& ch, const InputCovariance& cx,
                        std::size_t num_symbols, std::uint64_t seed);

/// log2 det(T_kk T_kk^H) for each diagonal block of a block upper-triangular T.
/// Throws InvalidBlockSpec if the sizes do not partition T or T has mass
/// below the block diagonal.
RealVector block_rates(const ComplexMatrix& t, const std::vector<std::size_t>& sizes);

} // namespace jtri
