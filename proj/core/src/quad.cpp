#include "fplap/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "fplap/errors.hpp"

namespace fplap {

namespace {

// QUADPACK qk21 abscissae and weights. Gauss nodes are the odd entries of kXgk.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208034231020, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool splittable;
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel gauss_kronrod_21(const Integrand1D& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kWgk[10] * fc;
    double gauss = 0.0;
    double resabs = std::abs(kronrod);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double sum = f1[j] + f2[j];
        kronrod += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * kronrod;
    double resasc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double ah = std::abs(half);
    kronrod *= half;
    gauss *= half;
    resabs *= ah;
    resasc *= ah;

    double err = std::abs(kronrod - gauss);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * resabs, err);
    }
    if (!std::isfinite(kronrod)) {
        throw NumericalError("integrate_interval: non-finite integrand value on [" +
                             std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const bool splittable = center > a && center < b && std::abs(b - a) > 4.0 * kEps * std::max(std::abs(a), std::abs(b));
    return {a, b, kronrod, err, splittable};
}

double target(const QuadSpec& spec, double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Inner integrals of nested rules get a share of the budget proportional to the outer measure.
QuadSpec inner_spec(const QuadSpec& spec, double outer_measure) {
    QuadSpec inner = spec;
    inner.abs_tol = 0.1 * spec.abs_tol / std::max(outer_measure, 1e-300);
    // Relative tolerances below ~1e-13 sit under the rule's own roundoff estimate.
    inner.rel_tol = std::max(0.1 * spec.rel_tol, 1e-13);
    inner.singular_split_radius = 0.0;
    return inner;
}

void check_dim(int d, const char* who) {
    if (d < 1 || d > 3) {
        throw ParameterError(std::string(who) + ": supported dimensions are 1, 2, 3 (got " +
                             std::to_string(d) + ")");
    }
}

}  // namespace

void QuadSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw ParameterError("QuadSpec: tolerances must be positive");
    }
    if (max_subdivisions < 1) throw ParameterError("QuadSpec: max_subdivisions must be >= 1");
    if (!(singular_split_radius >= 0.0)) {
        throw ParameterError("QuadSpec: singular_split_radius must be >= 0");
    }
}

QuadSpec QuadSpec::tightened(double factor) const {
    QuadSpec out = *this;
    out.abs_tol *= factor;
    out.rel_tol *= factor;
    return out;
}

double unit_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double unit_ball_volume(int d) { return unit_sphere_area(d) / d; }

QuadResult integrate_interval(const Integrand1D& f, double a, double b, const QuadSpec& spec,
                              std::span<const double> breakpoints) {
    spec.validate();
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate_interval(f, b, a, spec, breakpoints);
        return {-r.value, r.error};
    }

    std::vector<double> cuts{a};
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> open;
    double frozen_value = 0.0;
    double frozen_error = 0.0;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel pnl = gauss_kronrod_21(f, cuts[i], cuts[i + 1]);
        value += pnl.value;
        error += pnl.error;
        open.push(pnl);
    }

    int panels = static_cast<int>(open.size());
    while (error > target(spec, value)) {
        if (open.empty()) break;
        Panel worst = open.top();
        open.pop();
        if (!worst.splittable) {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        if (panels >= spec.max_subdivisions) {
            open.push(worst);
            throw QuadratureError("integrate_interval: no convergence on [" + std::to_string(a) +
                                      ", " + std::to_string(b) + "] within " +
                                      std::to_string(spec.max_subdivisions) + " subdivisions",
                                  value, error);
        }
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod_21(f, worst.a, mid);
        Panel right = gauss_kronrod_21(f, mid, worst.b);
        ++panels;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
    }

    // Re-sum to remove drift from the incremental updates.
    double total = frozen_value;
    double total_err = frozen_error;
    while (!open.empty()) {
        total += open.top().value;
        total_err += open.top().error;
        open.pop();
    }
    if (frozen_error > target(spec, total)) {
        throw QuadratureError("integrate_interval: roundoff limit reached on [" + std::to_string(a) +
                                  ", " + std::to_string(b) + "]",
                              total, total_err);
    }
    return {total, total_err};
}

QuadResult integrate_unit_sphere(const IntegrandND& f, int d, const QuadSpec& spec) {
    check_dim(d, "integrate_unit_sphere");
    if (d == 1) {
        return {f(Vec{1.0, 0.0, 0.0}) + f(Vec{-1.0, 0.0, 0.0}), 0.0};
    }
    const double two_pi = 2.0 * std::numbers::pi;
    if (d == 2) {
        return integrate_interval(
            [&](double th) { return f(Vec{std::cos(th), std::sin(th), 0.0}); }, 0.0, two_pi, spec);
    }
    const QuadSpec in = inner_spec(spec, 2.0);
    double worst_inner = 0.0;
    QuadResult outer = integrate_interval(
        [&](double th) {
            const double st = std::sin(th);
            const double ct = std::cos(th);
            QuadResult ring = integrate_interval(
                [&](double ph) { return f(Vec{ct, st * std::cos(ph), st * std::sin(ph)}); }, 0.0,
                two_pi, in);
            worst_inner = std::max(worst_inner, ring.error);
            return st * ring.value;
        },
        0.0, std::numbers::pi, spec);
    outer.error += 2.0 * worst_inner;
    return outer;
}

QuadResult integrate_sphere(const IntegrandND& f, double r, int d, const QuadSpec& spec) {
    check_dim(d, "integrate_sphere");
    if (!(r > 0.0)) throw ParameterError("integrate_sphere: radius must be positive");
    const double scale = std::pow(r, d - 1);
    QuadSpec unit = spec;
    unit.abs_tol = spec.abs_tol / scale;
    QuadResult res = integrate_unit_sphere([&](const Vec& w) { return f(r * w); }, d, unit);
    return {scale * res.value, scale * res.error};
}

QuadResult integrate_ball(const IntegrandND& f, double r, int d, const QuadSpec& spec) {
    check_dim(d, "integrate_ball");
    if (!(r > 0.0)) throw ParameterError("integrate_ball: radius must be positive");
    if (d == 1) {
        // Folding onto [0, r] pairs y with -y, which is the symmetrized form everywhere.
        const double split = std::min(spec.singular_split_radius, r);
        std::array<double, 1> bp{split};
        return integrate_interval(
            [&](double y) { return f(Vec{y, 0.0, 0.0}) + f(Vec{-y, 0.0, 0.0}); }, 0.0, r, spec,
            split > 0.0 && split < r ? std::span<const double>(bp) : std::span<const double>());
    }
    const double split = spec.singular_split_radius;
    const double outer_measure = std::pow(r, d) / d;
    const QuadSpec in = inner_spec(spec, outer_measure);
    double worst_inner = 0.0;
    std::array<double, 1> bp{split};
    QuadResult outer = integrate_interval(
        [&](double rho) {
            QuadResult shell;
            if (rho < split) {
                shell = integrate_unit_sphere(
                    [&](const Vec& w) { return 0.5 * (f(rho * w) + f(-(rho * w))); }, d, in);
            } else {
                shell = integrate_unit_sphere([&](const Vec& w) { return f(rho * w); }, d, in);
            }
            worst_inner = std::max(worst_inner, shell.error);
            return std::pow(rho, d - 1) * shell.value;
        },
        0.0, r, spec,
        split > 0.0 && split < r ? std::span<const double>(bp) : std::span<const double>());
    outer.error += worst_inner * outer_measure;
    return outer;
}

QuadResult integrate_radial_tail(const Integrand1D& g, double r_in, double decay, double bound,
                                 const QuadSpec& spec) {
    spec.validate();
    if (!(r_in > 0.0)) throw ParameterError("integrate_radial_tail: r_in must be positive");
    if (!(decay > 0.0)) throw ParameterError("integrate_radial_tail: decay exponent must be positive");
    if (!std::isfinite(bound) || bound < 0.0) {
        throw ContractError("integrate_radial_tail: a finite bound on the integrand is required");
    }
    if (bound == 0.0) return {};

    // Mass of bound * rho^{-1-decay} beyond rho_max equals bound * r_in^{-decay} * t_min / decay.
    const double scale = std::pow(r_in, -decay) / decay;
    const double t_min = std::min(1.0, 0.5 * spec.abs_tol / (bound * scale));
    const double dropped = bound * scale * t_min;
    if (t_min >= 1.0) return {0.0, dropped};

    QuadSpec body = spec;
    body.abs_tol = 0.5 * spec.abs_tol;
    QuadResult res = integrate_interval(
        [&](double t) {
            const double rho = r_in * std::pow(t, -1.0 / decay);
            return g(rho) * rho / (decay * t);
        },
        t_min, 1.0, body);
    res.error += dropped;
    return res;
}

QuadResult integrate_tail(const IntegrandND& f, double r_in, int d, double s, double p,
                          double bound_f, const QuadSpec& spec) {
    check_dim(d, "integrate_tail");
    const double sp = s * p;
    if (!(sp > 0.0)) throw ParameterError("integrate_tail: s*p must be positive");
    if (!std::isfinite(bound_f)) {
        throw ContractError("integrate_tail: bound_f is required (finite sup of |f|)");
    }
    const double area = unit_sphere_area(d);
    // Inner sphere integrals are multiplied by at most r_in^{-sp}/sp after the mapping.
    const QuadSpec in = inner_spec(spec, area * std::pow(r_in, -sp) / sp);
    double worst_inner = 0.0;
    QuadResult res = integrate_radial_tail(
        [&](double rho) {
            QuadResult shell = integrate_unit_sphere([&](const Vec& w) { return f(rho * w); }, d, in);
            worst_inner = std::max(worst_inner, shell.error);
            return shell.value * std::pow(rho, -1.0 - sp);
        },
        r_in, sp, bound_f * area, spec);
    res.error += worst_inner * std::pow(r_in, -sp) / sp;
    return res;
}

}  // namespace fplap
