#pragma once

#include <functional>
#include <span>

#include "fplap/types.hpp"

namespace fplap {

/// Tolerances and limits for adaptive integration.
struct QuadSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    /// Inside this radius ball integrands are replaced by 1/2 (f(y) + f(-y)).
    double singular_split_radius = 0.0;

    void validate() const;
    /// Same spec with tolerances scaled by `factor`.
    QuadSpec tightened(double factor) const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(const Vec&)>;

double unit_sphere_area(int d);
double unit_ball_volume(int d);

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]. Breakpoints inside (a, b) seed the panel list.
QuadResult integrate_interval(const Integrand1D& f, double a, double b, const QuadSpec& spec,
                              std::span<const double> breakpoints = {});

/// Integral over the ball B_r in R^d, d in {1, 2, 3}.
QuadResult integrate_ball(const IntegrandND& f, double r, int d, const QuadSpec& spec);

/// Surface integral (not averaged) over the sphere of radius r. For d = 1 this is f(r) + f(-r).
QuadResult integrate_sphere(const IntegrandND& f, double r, int d, const QuadSpec& spec);

/// int_{|y| > r_in} f(y) |y|^{-(d+sp)} dy, given |f| <= bound_f.
///
/// The radial variable is mapped through rho = r_in t^{-1/(sp)}, which turns the kernel into
/// a constant density on t in (0, 1]. The piece t < t_min (|y| > rho_max) is dropped and its
/// worst case bound_f * |S^{d-1}| rho_max^{-sp} / (sp) is added to the error, with rho_max chosen
/// so that this bound is at most abs_tol / 2.
QuadResult integrate_tail(const IntegrandND& f, double r_in, int d, double s, double p,
                          double bound_f, const QuadSpec& spec);

/// int_{r_in}^inf g(rho) d rho for |g(rho)| <= bound * rho^{-1-decay}, same mapping as integrate_tail.
QuadResult integrate_radial_tail(const Integrand1D& g, double r_in, double decay, double bound,
                                 const QuadSpec& spec);

/// int over the unit sphere S^{d-1} of f(omega). For d = 1, f(1) + f(-1).
QuadResult integrate_unit_sphere(const IntegrandND& f, int d, const QuadSpec& spec);

}  // namespace fplap
