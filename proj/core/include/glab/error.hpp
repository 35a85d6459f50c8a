#pragma once

#include <stdexcept>
#include <string>

namespace glab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model parameters (non-positive rates, bad tolerances, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Incompatible dimensions or windows.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Instance too large for an exact solver. `cap` is the limit that was hit.
class SizeError : public Error {
public:
    SizeError(const std::string& what, std::size_t count, std::size_t cap)
        : Error(what), count_(count), cap_(cap) {}

    std::size_t count() const noexcept { return count_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t count_;
    std::size_t cap_;
};

/// Operation has no meaningful answer on this input (e.g. nearest atom of
/// an empty configuration).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

}  // namespace glab
