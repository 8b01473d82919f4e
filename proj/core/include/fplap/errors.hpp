#pragma once

#include <stdexcept>
#include <string>

namespace fplap {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the operator's admissible domain (p <= 1, s outside (0,1), ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A caller-side contract was not honoured (missing bound, missing derivatives, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Discretization or scheme configuration violates a stated inequality.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// A lattice sample needed by an operator cannot be resolved.
class DomainCoverageError : public Error {
public:
    using Error::Error;
};

/// NaN/overflow or another numerical breakdown.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Requested time step exceeds the stability bound without an explicit override.
class CflError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Too few usable points for a least-squares fit.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate reached.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double best_value, double best_error)
        : NumericalError(what), best_value_(best_value), best_error_(best_error) {}

    double best_value() const noexcept { return best_value_; }
    double best_error() const noexcept { return best_error_; }

private:
    double best_value_;
    double best_error_;
};

}  // namespace fplap
