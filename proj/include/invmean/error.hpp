#pragma once

#include <stdexcept>
#include <string>

namespace invmean {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (bad interval, c outside [-1, 1], ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A point outside the host interval was passed to a mean.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A function claimed to be a mean left [min(x,y), max(x,y)].
class MeanBoundsError : public Error {
public:
    MeanBoundsError(const std::string& what, double x, double y, double value)
        : Error(what), x_(x), y_(y), value_(value) {}

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double value() const noexcept { return value_; }

private:
    double x_;
    double y_;
    double value_;
};

/// An orbit failed mid-way; carries the step index at which the mean evaluation failed.
class OrbitError : public Error {
public:
    OrbitError(const std::string& what, std::size_t step) : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// An iteration did not stabilize within its step budget and no approximate
/// answer is acceptable to the caller.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace invmean
