#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "fplap/types.hpp"

namespace fplap {

/// Hoelder data: |phi(x) - phi(z)| <= constant * |x - z|^exponent.
struct HolderData {
    double exponent = 1.0;
    double constant = 0.0;
};

/// A real function on R^d together with the metadata the operators need.
///
/// `eval` must be safe to call concurrently. `sup_bound` is infinite for unbounded fields,
/// in which case nonlocal tails cannot be evaluated. Derivatives are optional; operators that
/// need them throw ContractError when they are empty.
struct ScalarField {
    std::function<double(const Vec&)> eval;
    double sup_bound = std::numeric_limits<double>::infinity();
    std::optional<HolderData> holder;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
    /// Optional cancellation-free phi(x + y) - phi(x).
    std::function<double(const Vec&, const Vec&)> increment;
    std::string name;

    double operator()(const Vec& x) const { return eval(x); }
    double diff(const Vec& x, const Vec& y) const {
        return increment ? increment(x, y) : eval(x + y) - eval(x);
    }
    bool bounded() const { return sup_bound < std::numeric_limits<double>::infinity(); }
    bool has_derivatives() const { return static_cast<bool>(gradient) && static_cast<bool>(hessian); }

    /// Returns the field lambda * phi (derivatives and bounds rescaled).
    ScalarField scaled(double lambda) const;
    /// Returns the field phi(. - shift).
    ScalarField translated(const Vec& shift) const;
};

}  // namespace fplap
