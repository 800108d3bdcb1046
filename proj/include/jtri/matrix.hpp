#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace jtri {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;

/// Dense complex matrix stored row-major.
///
/// Dimensions are always positive and entries always finite; both are
/// checked on construction from external data.
class ComplexMatrix {
public:
    /// rows x cols matrix of zeros.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> d);
    /// rows x cols matrix whose leading diagonal is `d` (generalized diagonal).
    static ComplexMatrix diagonal(std::size_t rows, std::size_t cols, std::span<const double> d);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return data_; }

    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] ComplexMatrix transpose() const;
    [[nodiscard]] ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

    /// Real parts of the leading diagonal.
    [[nodiscard]] RealVector real_diagonal() const;
    [[nodiscard]] double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex s, ComplexMatrix m);

/// [top; bottom]
ComplexMatrix vstack(const ComplexMatrix& top, const ComplexMatrix& bottom);
/// [left, right]
ComplexMatrix hstack(const ComplexMatrix& left, const ComplexMatrix& right);
/// diag(a, b) as a block-diagonal matrix.
ComplexMatrix block_diagonal(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||a - b||_F
double distance(const ComplexMatrix& a, const ComplexMatrix& b);
/// ||a - b||_F / max(||a||_F, tiny)
double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |entry| strictly below the leading diagonal.
double max_below_diagonal(const ComplexMatrix& a);

} // namespace jtri
