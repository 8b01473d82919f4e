#pragma once

#include <string>
#include <vector>

#include "fplap/field.hpp"

namespace fplap {

/// Knobs shared by the builtin test functions. Fields ignore what they do not use.
struct FieldOptions {
    double value = 1.0;          // "const"
    Vec gradient{1.0, 0.0, 0.0}; // "affine" slope
    double clamp = 10.0;         // "affine": values clamped to [-clamp, clamp]
    double s = 0.5;              // "heaviside-s" exponent
    double cutoff = 1e14;        // "heaviside-s": max{0,x_1}^s is capped at cutoff^s
};

ScalarField constant_field(double value);
/// clamp(g . x, -M, M). Exactly affine on |g . x| < M.
ScalarField affine_field(const Vec& g, double clamp);
/// exp(-|x|^2), Lipschitz constant sqrt(2/e).
ScalarField gauss_bump();
/// 1 / (1 + |x|^2) with analytic gradient and hessian.
ScalarField rational_field(int d);
/// min{x_1^2, 1}.
ScalarField min_x2();
/// min{exp(x_1), 2}.
ScalarField min_exp();
/// min{max{0, x_1}, M}^s. Hoelder with exponent s and constant 1.
ScalarField heaviside_s(double s, double cutoff);

/// a + b. Hoelder data is combined at the smaller exponent, using 2 sup on |x - z| >= 1.
ScalarField add_fields(const ScalarField& a, const ScalarField& b);

/// Registry lookup. Throws ConfigurationError for unknown names.
ScalarField make_builtin(const std::string& name, int d, const FieldOptions& options = {});
const std::vector<std::string>& builtin_names();

}  // namespace fplap
