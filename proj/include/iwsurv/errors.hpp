#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iwsurv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Root finding was given an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// A requested moment (or a statistic built on it) does not exist for the
/// given shape parameter.
class MomentError : public Error {
public:
    using Error::Error;
};

/// Polynomial cumulative-hazard coefficients violate h(t) > 0 on the horizon.
class CoefficientError : public Error {
public:
    using Error::Error;
};

/// A statistic is undefined for the data (for example zero variance).
class StatisticError : public Error {
public:
    using Error::Error;
};

/// Model fitting failed.
class FitError : public Error {
public:
    using Error::Error;
};

/// A Monte Carlo study could not be completed under the replicate policy.
class StudyError : public Error {
public:
    using Error::Error;
};

/// The optimizer hit its evaluation cap. Carries the best point seen.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> best_point, double best_value)
        : Error(what), best_point_(std::move(best_point)), best_value_(best_value) {}

    const std::vector<double>& best_point() const noexcept { return best_point_; }
    double best_value() const noexcept { return best_value_; }

private:
    std::vector<double> best_point_;
    double best_value_;
};

} // namespace iwsurv
