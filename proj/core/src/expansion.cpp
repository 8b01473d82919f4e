#include "fplap/expansion.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fplap/errors.hpp"

namespace fplap {

namespace {

void require_radius(double r, const char* who) {
    if (!(r > 0.0)) throw ParameterError(std::string(who) + ": radius must be positive");
}

double tail_bound(const ScalarField& phi, double p, const char* who) {
    if (!phi.bounded()) {
        throw ContractError(std::string(who) + ": field '" + phi.name +
                            "' has no sup_bound; the nonlocal tail cannot be bounded");
    }
    return std::pow(2.0 * phi.sup_bound, p - 1.0);
}

// Shell integrals nested inside a radial rule get a tighter budget.
QuadSpec shell_spec(const QuadSpec& spec) {
    QuadSpec s = spec.tightened(0.01);
    s.singular_split_radius = 0.0;
    return s;
}

double quadratic_model(const Vec& g, const Mat& H, const Vec& y, double p) {
    const double gy = std::abs(dot(g, y));
    return (p - 1.0) * std::pow(gy, p - 2.0) * dot(y, mat_vec(H, y));
}

// Sphere integral of the quadratic model. In d = 2 the angle is measured from g so the kinks of
// |g.y|^{p-2} at g.y = 0 sit on panel breakpoints.
QuadResult model_sphere_integral(const Vec& g, const Mat& H, double r, double p, int d,
                                 const QuadSpec& spec) {
    const auto f = [&](const Vec& y) { return quadratic_model(g, H, y, p); };
    const double gn = norm(g);
    if (d != 2 || gn == 0.0) return integrate_sphere(f, r, d, spec);
    const Vec e1 = (1.0 / gn) * g;
    const Vec e2{-e1[1], e1[0], 0.0};
    const double pi = std::numbers::pi;
    const std::array<double, 3> bp{0.5 * pi, pi, 1.5 * pi};
    QuadSpec unit = spec;
    unit.abs_tol = spec.abs_tol / r;
    const QuadResult q = integrate_interval(
        [&](double th) { return f(r * (std::cos(th) * e1 + std::sin(th) * e2)); }, 0.0, 2.0 * pi,
        unit, bp);
    return {r * q.value, r * q.error};
}

}  // namespace

const char* to_string(ExpansionKind kind) {
    switch (kind) {
        case ExpansionKind::LocalSurface: return "LocalSurface";
        case ExpansionKind::LocalVolume: return "LocalVolume";
        case ExpansionKind::Fractional: return "Fractional";
        case ExpansionKind::BucurSquassina: return "BucurSquassina";
    }
    return "?";
}

ExpansionKind expansion_kind_from_string(const std::string& name) {
    if (name == "LocalSurface") return ExpansionKind::LocalSurface;
    if (name == "LocalVolume") return ExpansionKind::LocalVolume;
    if (name == "Fractional") return ExpansionKind::Fractional;
    if (name == "BucurSquassina") return ExpansionKind::BucurSquassina;
    throw ConfigurationError("unknown expansion kind '" + name + "'");
}

ExpansionResult mvp_local_surface(const ScalarField& phi, const Vec& x, double r, double p, int d,
                                  const QuadSpec& spec) {
    require_radius(r, "mvp_local_surface");
    if (!(p > 1.0)) throw ParameterError("mvp_local_surface: requires p > 1");
    const QuadResult q = integrate_sphere(
        [&](const Vec& y) { return jp_unchecked(phi.diff(x, y), p); }, r, d, spec);
    const double measure = unit_sphere_area(d) * std::pow(r, d - 1);
    const double factor = kappa_pd(p, d) / (std::pow(r, p) * measure);
    return {factor * q.value, factor * q.error, r, ExpansionKind::LocalSurface};
}

ExpansionResult mvp_local_volume(const ScalarField& phi, const Vec& x, double r, double p, int d,
                                 const QuadSpec& spec) {
    require_radius(r, "mvp_local_volume");
    if (!(p > 1.0)) throw ParameterError("mvp_local_volume: requires p > 1");
    const QuadResult q = integrate_ball(
        [&](const Vec& y) { return jp_unchecked(phi.diff(x, y), p); }, r, d, spec);
    const double measure = unit_ball_volume(d) * std::pow(r, d);
    const double factor = (p + d) * kappa_pd(p, d) / (d * std::pow(r, p) * measure);
    return {factor * q.value, factor * q.error, r, ExpansionKind::LocalVolume};
}

ExpansionResult mvp_fractional(const ScalarField& phi, const Vec& x, double r,
                               const OperatorParams& params, const QuadSpec& spec) {
    params.validate();
    require_radius(r, "mvp_fractional");
    const double bound = tail_bound(phi, params.p, "mvp_fractional");
    const int d = params.d;
    const double p = params.p;
    const double sp = params.sp();
    auto diff = [&](const Vec& y) { return jp_unchecked(phi.diff(x, y), p); };

    QuadSpec half = spec;
    half.abs_tol *= 0.5;
    const QuadResult inner = integrate_ball(diff, r, d, half);
    const double factor = (p + d) / (p * (1.0 - params.s) * std::pow(r, d + sp));
    const QuadResult outer = integrate_tail(diff, r, d, params.s, p, bound, half);
    return {factor * inner.value + outer.value, factor * inner.error + outer.error, r,
            ExpansionKind::Fractional};
}

ExpansionResult bs_expansion(const ScalarField& phi, const Vec& x, double r,
                             const OperatorParams& params, const QuadSpec& spec) {
    params.validate();
    require_radius(r, "bs_expansion");
    const double bound = tail_bound(phi, params.p, "bs_expansion");
    const int d = params.d;
    const double p = params.p;
    const double s = params.s;
    const QuadSpec shell = shell_spec(spec);
    double shell_err = 0.0;

    auto sphere_sum = [&](double rho) {
        const QuadResult q = integrate_unit_sphere(
            [&](const Vec& w) { return jp_unchecked(phi.diff(x, rho * w), p); }, d, shell);
        shell_err = std::max(shell_err, q.error);
        return q.value;
    };
    // Radial density without the (rho^2 - r^2)^{-s} factor.
    auto radial = [&](double rho) {
        return std::pow(rho, d - 1.0) * sphere_sum(rho) * std::pow(rho, -(d + (p - 2.0) * s));
    };

    QuadSpec half = spec;
    half.abs_tol *= 0.5;

    // t = (rho^2 - r^2)^{1-s} on [r, 2r] absorbs the endpoint singularity.
    const double t_end = std::pow(3.0 * r * r, 1.0 - s);
    const QuadResult near = integrate_interval(
        [&](double t) {
            const double rho = std::sqrt(r * r + std::pow(t, 1.0 / (1.0 - s)));
            return radial(rho) / (2.0 * (1.0 - s) * rho);
        },
        0.0, t_end, half);

    const double area = unit_sphere_area(d);
    const QuadResult far = integrate_radial_tail(
        [&](double rho) { return radial(rho) * std::pow(rho * rho - r * r, -s); }, 2.0 * r,
        params.sp(), std::pow(4.0 / 3.0, s) * bound * area, half);

    const double shell_total = shell_err * (std::pow(r, -params.sp()) + 1.0);
    return {near.value + far.value, near.error + far.error + shell_total, r,
            ExpansionKind::BucurSquassina};
}

QuadResult reference_fraclap(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                             const QuadSpec& spec, double delta) {
    params.validate();
    require_radius(delta, "reference_fraclap");
    const double bound = tail_bound(phi, params.p, "reference_fraclap");
    const int d = params.d;
    const double p = params.p;
    const double sp = params.sp();
    auto kernel_term = [&](const Vec& y) {
        return jp_unchecked(phi.diff(x, y), p) * std::pow(norm(y), -(d + sp));
    };
    QuadSpec inner_spec = spec;
    inner_spec.abs_tol *= 0.5;
    inner_spec.singular_split_radius = delta;
    const QuadResult inner = integrate_ball(kernel_term, delta, d, inner_spec);

    QuadSpec tail_spec = spec;
    tail_spec.abs_tol *= 0.5;
    const QuadResult outer = integrate_tail(
        [&](const Vec& y) { return jp_unchecked(phi.diff(x, y), p); }, delta, d, params.s, p,
        bound, tail_spec);
    return {inner.value + outer.value, inner.error + outer.error};
}

double plap_from_derivatives(const Vec& g, const Mat& H, double p, int d) {
    if (!(p > 1.0)) throw ParameterError("plap_from_derivatives: requires p > 1");
    double trace = 0.0;
    for (int i = 0; i < d; ++i) trace += H[i][i];
    const double gn = norm(g);
    if (gn == 0.0) {
        if (p == 2.0) return trace;
        if (p > 2.0) return 0.0;
        throw ContractError("plap_from_derivatives: gradient vanishes and p < 2");
    }
    const Vec e = (1.0 / gn) * g;
    return std::pow(gn, p - 2.0) * (trace + (p - 2.0) * dot(e, mat_vec(H, e)));
}

double reference_plap(const ScalarField& phi, const Vec& x, double p, int d) {
    if (!phi.has_derivatives()) {
        throw ContractError("reference_plap: field '" + phi.name +
                            "' does not provide analytic gradient and hessian");
    }
    return plap_from_derivatives(phi.gradient(x), phi.hessian(x), p, d);
}

IdentityPair identity_check_J2(const Vec& g, const Mat& H, double r, double p, int d,
                               const QuadSpec& spec) {
    require_radius(r, "identity_check_J2");
    const QuadResult q = model_sphere_integral(g, H, r, p, d, spec);
    const double average = q.value / (unit_sphere_area(d) * std::pow(r, d - 1));
    return {a_pd(p, d) * average, plap_from_derivatives(g, H, p, d) * std::pow(r, p)};
}

IdentityPair identity_check_J2_volume(const Vec& g, const Mat& H, double r, double p, int d,
                                      const QuadSpec& spec) {
    require_radius(r, "identity_check_J2_volume");
    const QuadResult q =
        integrate_ball([&](const Vec& y) { return quadratic_model(g, H, y, p); }, r, d, spec);
    const double average = q.value / (unit_ball_volume(d) * std::pow(r, d));
    return {(p + d) * a_pd(p, d) / d * average, plap_from_derivatives(g, H, p, d) * std::pow(r, p)};
}

IdentityPair identity_check_J1(const Vec& g, const Mat& H, double r, const OperatorParams& params,
                               const QuadSpec& spec) {
    params.validate();
    require_radius(r, "identity_check_J1");
    const int d = params.d;
    const double p = params.p;
    const double sp = params.sp();
    QuadSpec pv = spec;
    pv.singular_split_radius = r;
    const QuadResult q = integrate_ball(
        [&](const Vec& y) { return quadratic_model(g, H, y, p) * std::pow(norm(y), -(d + sp)); }, r,
        d, pv);
    return {a_spd(params.s, p, d) * q.value,
            plap_from_derivatives(g, H, p, d) * std::pow(r, p * (1.0 - params.s))};
}

}  // namespace fplap
