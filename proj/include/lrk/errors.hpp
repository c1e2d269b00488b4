#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform, or an index is out of range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Non-finite entries, or inputs violating an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The bidiagonal QR iteration hit its sweep cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::size_t superdiag_index, std::size_t sweeps)
        : Error("SVD did not converge: superdiagonal entry " +
                std::to_string(superdiag_index) + " still nonzero after " +
                std::to_string(sweeps) + " sweeps"),
          index_(superdiag_index) {}

    std::size_t superdiag_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A rank-selection policy cannot be satisfied for the given spectrum.
class PolicyError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported image / CSV input.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A model container failed one of its integrity checks.
class IntegrityError : public Error {
public:
    enum class Kind { bad_magic, length_mismatch, bad_checksum, invalid_payload };

    IntegrityError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

} // namespace lrk
