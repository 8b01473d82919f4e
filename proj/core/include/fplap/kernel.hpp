#pragma once

#include "fplap/field.hpp"
#include "fplap/types.hpp"

namespace fplap {

/// The triple (d, p, s) under the standing assumptions d >= 1, p > 1, 0 < s < 1.
struct OperatorParams {
    int d = 1;
    double p = 2.0;
    double s = 0.5;

    /// Throws ParameterError naming the violated inequality.
    void validate() const;
    double sp() const { return s * p; }
};

enum class RateTag { Uniform, NonvanishingGradient };

/// Which proved rate applies, plus the margin used to pick a point inside open rate intervals.
struct RateRegime {
    RateTag tag = RateTag::Uniform;
    double epsilon = 0.05;
};

/// J_p(xi) = |xi|^{p-2} xi, extended by 0 at xi = 0.
double jp(double xi, double p);

/// Same as jp without the parameter check. Specialised for p = 2, 3, 4.
inline double jp_unchecked(double xi, double p) {
    if (xi == 0.0) return 0.0;
    if (p == 2.0) return xi;
    if (p == 3.0) return std::abs(xi) * xi;
    if (p == 4.0) return xi * xi * xi;
    return std::pow(std::abs(xi), p - 2.0) * xi;
}

/// (J_p(phi(x+y) - phi(x)) + J_p(phi(x-y) - phi(x))) / |y|^p.
double dy_operator(const ScalarField& phi, const Vec& x, const Vec& y, double p);

/// Average of |y_1|^p over the unit sphere of R^d.
double sphere_average_abs_y1_pow(double p, int d);

/// 2 / (sphere average of |y_1|^p).
double kappa_pd(double p, int d);

/// (1/(p(1-s)) * int_{S^{d-1}} |y_1|^p d sigma)^{-1}.
double a_spd(double s, double p, int d);

/// (sphere average of |y_1|^p)^{-1}.
double a_pd(double p, int d);

/// Rate exponent gamma for the expansions.
///
/// Uniform (p >= 2 only): 2 if p = 2 or p >= 4, p - 2 on (2, 4).
/// NonvanishingGradient: 2 if p = 2 or p >= 3, otherwise sup of the open interval minus epsilon.
double gamma_exponent(double p, const RateRegime& regime);

/// Summability scale: r^{nu - sp} if nu < sp, |log r| if nu = sp, 1 if nu > sp.
double s_nu(double nu, double r, double s, double p);

}  // namespace fplap
