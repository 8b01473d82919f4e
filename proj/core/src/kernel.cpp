#include "fplap/kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fplap/errors.hpp"
#include "fplap/quad.hpp"

namespace fplap {

namespace {

void require_p(double p, const char* who) {
    if (!(p > 1.0)) {
        throw ParameterError(std::string(who) + ": requires p > 1 (got p = " + std::to_string(p) + ")");
    }
}

void require_d(int d, const char* who) {
    if (d < 1) throw ParameterError(std::string(who) + ": requires d >= 1");
}

}  // namespace

void OperatorParams::validate() const {
    if (d < 1) throw ParameterError("OperatorParams: d >= 1 violated (d = " + std::to_string(d) + ")");
    if (!(p > 1.0)) throw ParameterError("OperatorParams: p > 1 violated (p = " + std::to_string(p) + ")");
    if (!(s > 0.0 && s < 1.0)) {
        throw ParameterError("OperatorParams: 0 < s < 1 violated (s = " + std::to_string(s) + ")");
    }
}

double jp(double xi, double p) {
    require_p(p, "jp");
    return jp_unchecked(xi, p);
}

double dy_operator(const ScalarField& phi, const Vec& x, const Vec& y, double p) {
    require_p(p, "dy_operator");
    const double ny = norm(y);
    if (ny == 0.0) throw ParameterError("dy_operator: y must be nonzero");
    const double plus = jp_unchecked(phi.diff(x, y), p);
    const double minus = jp_unchecked(phi.diff(x, -y), p);
    return (plus + minus) / std::pow(ny, p);
}

double sphere_average_abs_y1_pow(double p, int d) {
    require_p(p, "sphere_average_abs_y1_pow");
    require_d(d, "sphere_average_abs_y1_pow");
    if (d == 1) return 1.0;
    // Polar angle reduction: d sigma on S^{d-1} is proportional to sin^{d-2}(theta) d theta.
    QuadSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-14;
    const std::array<double, 1> kink{0.5 * std::numbers::pi};
    const double weight_pow = d - 2.0;
    const QuadResult num = integrate_interval(
        [&](double th) {
            return std::pow(std::abs(std::cos(th)), p) * std::pow(std::sin(th), weight_pow);
        },
        0.0, std::numbers::pi, spec, kink);
    const QuadResult den = integrate_interval(
        [&](double th) { return std::pow(std::sin(th), weight_pow); }, 0.0, std::numbers::pi, spec);
    return num.value / den.value;
}

double kappa_pd(double p, int d) { return 2.0 / sphere_average_abs_y1_pow(p, d); }

double a_spd(double s, double p, int d) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("a_spd: requires 0 < s < 1");
    const double surface = sphere_average_abs_y1_pow(p, d) * unit_sphere_area(d);
    return p * (1.0 - s) / surface;
}

double a_pd(double p, int d) { return 1.0 / sphere_average_abs_y1_pow(p, d); }

double gamma_exponent(double p, const RateRegime& regime) {
    require_p(p, "gamma_exponent");
    if (!(regime.epsilon > 0.0)) throw ParameterError("gamma_exponent: epsilon must be positive");
    if (regime.tag == RateTag::Uniform) {
        if (p < 2.0) {
            throw ParameterError("gamma_exponent: no uniform rate is available for p < 2");
        }
        if (p == 2.0 || p >= 4.0) return 2.0;
        return p - 2.0;
    }
    if (p == 2.0 || p >= 3.0) return 2.0;
    const double lower = p > 2.0 ? 1.0 : 0.0;
    const double upper = p - 1.0;
    const double candidate = upper - regime.epsilon;
    return candidate > lower ? candidate : 0.5 * (lower + upper);
}

double s_nu(double nu, double r, double s, double p) {
    if (!(nu > 0.0)) throw ParameterError("s_nu: requires nu > 0");
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("s_nu: requires 0 < r < 1");
    const double sp = s * p;
    if (std::abs(nu - sp) <= 1e-12 * std::max(1.0, sp)) return std::abs(std::log(r));
    if (nu < sp) return std::pow(r, nu - sp);
    return 1.0;
}

ScalarField ScalarField::scaled(double lambda) const {
    ScalarField out = *this;
    auto base = eval;
    out.eval = [base, lambda](const Vec& x) { return lambda * base(x); };
    out.sup_bound = std::abs(lambda) * sup_bound;
    if (holder) out.holder = HolderData{holder->exponent, std::abs(lambda) * holder->constant};
    if (gradient) {
        auto g = gradient;
        out.gradient = [g, lambda](const Vec& x) { return lambda * g(x); };
    }
    if (increment) {
        auto inc = increment;
        out.increment = [inc, lambda](const Vec& x, const Vec& y) { return lambda * inc(x, y); };
    }
    if (hessian) {
        auto hs = hessian;
        out.hessian = [hs, lambda](const Vec& x) {
            Mat m = hs(x);
            for (auto& row : m) row = lambda * row;
            return m;
        };
    }
    return out;
}

ScalarField ScalarField::translated(const Vec& shift) const {
    ScalarField out = *this;
    auto base = eval;
    out.eval = [base, shift](const Vec& x) { return base(x - shift); };
    if (gradient) {
        auto g = gradient;
        out.gradient = [g, shift](const Vec& x) { return g(x - shift); };
    }
    if (hessian) {
        auto hs = hessian;
        out.hessian = [hs, shift](const Vec& x) { return hs(x - shift); };
    }
    if (increment) {
        auto inc = increment;
        out.increment = [inc, shift](const Vec& x, const Vec& y) { return inc(x - shift, y); };
    }
    return out;
}

}  // namespace fplap
