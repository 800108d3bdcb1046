#include "jtri/majorize.hpp"

#include "jtri/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace jtri {

namespace {

bool log_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

PositiveVector::PositiveVector(RealVector values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidValue("PositiveVector entries must be finite and > 0, got " + std::to_string(v));
        }
    }
}

PositiveVector::PositiveVector(std::initializer_list<double> values) : PositiveVector(RealVector(values)) {}

double PositiveVector::log_product() const {
    double s = 0.0;
    for (double v : values_) {
        s += std::log(v);
    }
    return s;
}

PositiveVector PositiveVector::sorted_descending() const {
    RealVector v = values_;
    std::stable_sort(v.begin(), v.end(), std::greater<>{});
    return PositiveVector(std::move(v));
}

BlockSpec::BlockSpec(std::vector<std::size_t> sizes, PositiveVector ratios, PositiveVector per_element)
    : sizes_(std::move(sizes)), ratios_(std::move(ratios)), per_element_(std::move(per_element)) {
    if (sizes_.empty() || sizes_.size() != ratios_.size()) {
        throw InvalidBlockSpec("block sizes and ratios must be non-empty and of equal length");
    }
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        if (sizes_[k] == 0) {
            throw InvalidBlockSpec("block sizes must be positive");
        }
        const double expected = std::pow(per_element_[k], static_cast<double>(sizes_[k]));
        if (std::abs(expected - ratios_[k]) > 1e-10 * ratios_[k]) {
            throw InvalidBlockSpec("block ratio does not match per-element ratio");
        }
    }
}

BlockSpec BlockSpec::from_per_element(std::vector<std::size_t> sizes, PositiveVector per_element) {
    if (sizes.size() != per_element.size()) {
        throw InvalidBlockSpec("block sizes and ratios must be of equal length");
    }
    RealVector rho(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        rho[k] = std::pow(per_element[k], static_cast<double>(sizes[k]));
    }
    return BlockSpec(std::move(sizes), PositiveVector(std::move(rho)), std::move(per_element));
}

BlockSpec BlockSpec::from_determinant_ratios(std::vector<std::size_t> sizes, PositiveVector ratios) {
    if (sizes.size() != ratios.size()) {
        throw InvalidBlockSpec("block sizes and ratios must be of equal length");
    }
    RealVector r(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] == 0) {
            throw InvalidBlockSpec("block sizes must be positive");
        }
        r[k] = std::pow(ratios[k], 1.0 / static_cast<double>(sizes[k]));
    }
    return BlockSpec(std::move(sizes), std::move(ratios), PositiveVector(std::move(r)));
}

std::size_t BlockSpec::total_size() const noexcept {
    return std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{0});
}

MajorizationReport check_majorization(const PositiveVector& x, const PositiveVector& y, double tol) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("majorization: lengths " + std::to_string(x.size()) + " and " +
                                std::to_string(y.size()) + " differ");
    }
    const std::size_t n = x.size();
    MajorizationReport rep;
    if (n == 0) {
        rep.holds = true;
        return rep;
    }
    const auto xs = x.sorted_descending();
    const auto ys = y.sorted_descending();

    double px = 0.0;
    double py = 0.0;
    rep.worst_prefix_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        px += std::log(xs[k]);
        py += std::log(ys[k]);
        const double margin = px - py;
        rep.worst_prefix_margin = std::min(rep.worst_prefix_margin, margin);
        if (!rep.violated_prefix && margin < -tol * std::max({1.0, std::abs(px), std::abs(py)})) {
            rep.violated_prefix = k + 1;
        }
    }
    const double lx = x.log_product();
    const double ly = y.log_product();
    rep.log_product_gap = lx - ly;
    if (!log_close(lx, ly, tol) && !rep.violated_prefix) {
        rep.violated_prefix = n;
    }
    rep.holds = !rep.violated_prefix.has_value();
    return rep;
}

bool majorizes(const PositiveVector& x, const PositiveVector& y, double tol) {
    return check_majorization(x, y, tol).holds;
}

PositiveVector geometric_mean_vector(const PositiveVector& x) {
    if (x.empty()) {
        throw InvalidDimensions("geometric_mean_vector: empty input");
    }
    const double g = std::exp(x.log_product() / static_cast<double>(x.size()));
    return PositiveVector(RealVector(x.size(), g));
}

bool block_feasible(const PositiveVector& mu, const BlockSpec& spec, double tol) {
    if (spec.total_size() != mu.size()) {
        throw DimensionMismatch("block_feasible: block sizes sum to " + std::to_string(spec.total_size()) +
                                " but the GSV vector has length " + std::to_string(mu.size()));
    }
    const auto mus = mu.sorted_descending();
    const auto& sizes = spec.sizes();
    const std::size_t k_blocks = sizes.size();

    std::vector<std::size_t> order(k_blocks);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spec.per_element_ratios()[a] > spec.per_element_ratios()[b];
    });

    double prefix_rho = 0.0;
    double prefix_mu = 0.0;
    std::size_t next = 0;
    for (std::size_t l = 0; l < k_blocks; ++l) {
        const std::size_t k = order[l];
        prefix_rho += std::log(spec.ratios()[k]);
        for (std::size_t c = 0; c < sizes[k]; ++c) {
            prefix_mu += std::log(mus[next++]);
        }
        if (l + 1 < k_blocks &&
            prefix_rho - prefix_mu > tol * std::max({1.0, std::abs(prefix_rho), std::abs(prefix_mu)})) {
            return false;
        }
    }
    return log_close(prefix_rho, prefix_mu, tol);
}

} // namespace jtri
