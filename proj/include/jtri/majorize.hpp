#pragma once

#include "jtri/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace jtri {

/// Vector of strictly positive, finite reals.
class PositiveVector {
public:
    PositiveVector() = default;
    explicit PositiveVector(RealVector values);
    PositiveVector(std::initializer_list<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const RealVector& values() const noexcept { return values_; }
    [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
    [[nodiscard]] auto end() const noexcept { return values_.end(); }

    /// Sum of natural logarithms of the entries.
    [[nodiscard]] double log_product() const;
    [[nodiscard]] PositiveVector sorted_descending() const;

private:
    RealVector values_;
};

/// Block partition for the block-triangular feasibility condition.
///
/// `ratios[k]` is |det T1_kk / det T2_kk| for block k and
/// `per_element_ratios[k]` its n_k-th root.
class BlockSpec {
public:
    static BlockSpec from_per_element(std::vector<std::size_t> sizes, PositiveVector per_element);
    static BlockSpec from_determinant_ratios(std::vector<std::size_t> sizes, PositiveVector ratios);

    [[nodiscard]] const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    [[nodiscard]] const PositiveVector& ratios() const noexcept { return ratios_; }
    [[nodiscard]] const PositiveVector& per_element_ratios() const noexcept { return per_element_; }
    [[nodiscard]] std::size_t total_size() const noexcept;

private:
    BlockSpec(std::vector<std::size_t> sizes, PositiveVector ratios, PositiveVector per_element);

    std::vector<std::size_t> sizes_;
    PositiveVector ratios_;
    PositiveVector per_element_;
};

inline constexpr double kDefaultMajorizationTol = 1e-9;

struct MajorizationReport {
    bool holds = false;
    /// 1-based prefix length of the first violation; n for a product mismatch.
    std::optional<std::size_t> violated_prefix;
    /// log(prod x) - log(prod y)
    double log_product_gap = 0.0;
    /// Smallest prefix margin min_k (sum log x~ - sum log y~) over k < n.
    double worst_prefix_margin = 0.0;
};

/// Multiplicative majorization x >= y in log domain, with `tol` relative
/// on the log-products.
MajorizationReport check_majorization(const PositiveVector& x, const PositiveVector& y,
                                      double tol = kDefaultMajorizationTol);

bool majorizes(const PositiveVector& x, const PositiveVector& y, double tol = kDefaultMajorizationTol);

/// Constant vector at the geometric mean of x.
PositiveVector geometric_mean_vector(const PositiveVector& x);

/// Existence test for a block joint triangularization with the given block
/// structure. Blocks are ordered by non-increasing per-element ratio, not by
/// determinant ratio.
bool block_feasible(const PositiveVector& mu, const BlockSpec& spec, double tol = kDefaultMajorizationTol);

} // namespace jtri
