#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jtri {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimensions : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class InvalidValue : public Error {
public:
    using Error::Error;
};

/// Raised when a requested diagonal (or diagonal-ratio) vector is not
/// multiplicatively majorized by the available spectrum.
///
/// `prefix()` is the 1-based length of the first violated prefix product;
/// it equals the vector length when only the total products disagree.
class NotMajorized : public Error {
public:
    NotMajorized(const std::string& what, std::size_t prefix)
        : Error(what), prefix_(prefix) {}

    [[nodiscard]] std::size_t prefix() const noexcept { return prefix_; }

private:
    std::size_t prefix_;
};

class InconsistentFactors : public Error {
public:
    using Error::Error;
};

class InvalidBlockSpec : public Error {
public:
    using Error::Error;
};

class NotFeasible : public Error {
public:
    using Error::Error;
};

/// Malformed text input.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace jtri
