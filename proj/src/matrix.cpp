#include "jtri/matrix.hpp"

#include "jtri/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jtri {

namespace {

void require_positive(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw InvalidDimensions("matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
                                std::to_string(cols));
    }
}

void require_finite(std::span<const Complex> entries) {
    for (const auto& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvalidValue("matrix entries must be finite");
        }
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + " differ");
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    require_positive(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require_positive(rows, cols);
    if (data_.size() != rows * cols) {
        throw InvalidDimensions("entry count " + std::to_string(data_.size()) + " does not match " +
                                std::to_string(rows) + "x" + std::to_string(cols));
    }
    require_finite(data_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    require_positive(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw InvalidDimensions("ragged initializer list");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
    return diagonal(d.size(), d.size(), d);
}

ComplexMatrix ComplexMatrix::diagonal(std::size_t rows, std::size_t cols, std::span<const double> d) {
    ComplexMatrix m(rows, cols);
    const std::size_t k = std::min({rows, cols, d.size()});
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(d[i])) {
            throw InvalidValue("diagonal entries must be finite");
        }
        m(i, i) = d[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw InvalidDimensions("block out of range");
    }
    ComplexMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            out(i, j) = (*this)(r0 + i, c0 + j);
        }
    }
    return out;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
        throw InvalidDimensions("block out of range");
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            (*this)(r0 + i, c0 + j) = b(i, j);
        }
    }
}

RealVector ComplexMatrix::real_diagonal() const {
    const std::size_t k = std::min(rows_, cols_);
    RealVector d(k);
    for (std::size_t i = 0; i < k; ++i) {
        d[i] = (*this)(i, i).real();
    }
    return d;
}

double ComplexMatrix::frobenius_norm() const {
    // scaled accumulation keeps tiny and huge entries from under/overflowing
    double scale = 0.0;
    for (const auto& z : data_) {
        scale = std::max({scale, std::abs(z.real()), std::abs(z.imag())});
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& z : data_) {
        sum += std::norm(z / scale);
    }
    return scale * std::sqrt(sum);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_shape(*this, rhs, "operator+");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += rhs.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_shape(*this, rhs, "operator-");
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= rhs.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionMismatch("matrix product: inner dimensions " + std::to_string(lhs.cols()) + " and " +
                                std::to_string(rhs.rows()) + " differ");
    }
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix m) {
    m *= s;
    return m;
}

ComplexMatrix vstack(const ComplexMatrix& top, const ComplexMatrix& bottom) {
    if (top.cols() != bottom.cols()) {
        throw DimensionMismatch("vstack: column counts differ");
    }
    ComplexMatrix out(top.rows() + bottom.rows(), top.cols());
    out.set_block(0, 0, top);
    out.set_block(top.rows(), 0, bottom);
    return out;
}

ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right) {
    if (left.rows() != right.rows()) {
        throw DimensionMismatch("hstack: row counts differ");
    }
    ComplexMatrix out(left.rows(), left.cols() + right.cols());
    out.set_block(0, 0, left);
    out.set_block(0, left.cols(), right);
    return out;
}

ComplexMatrix block_diagonal(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), a.cols(), b);
    return out;
}

double distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm();
}

double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    const double scale = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());
    return distance(a, b) / scale;
}

double max_below_diagonal(const ComplexMatrix& a) {
    double worst = 0.0;
    for (std::size_t i = 1; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < std::min(i, a.cols()); ++j) {
            worst = std::max(worst, std::abs(a(i, j)));
        }
    }
    return worst;
}

} // namespace jtri
