#include "fplap/fields.hpp"

#include <algorithm>
#include <cmath>

#include "fplap/errors.hpp"

namespace fplap {

ScalarField constant_field(double value) {
    ScalarField f;
    f.eval = [value](const Vec&) { return value; };
    f.sup_bound = std::abs(value);
    f.holder = HolderData{1.0, std::abs(value)};
    f.gradient = [](const Vec&) { return Vec{}; };
    f.hessian = [](const Vec&) { return Mat{}; };
    f.name = "const";
    return f;
}

ScalarField affine_field(const Vec& g, double clamp) {
    if (!(clamp > 0.0)) throw ParameterError("affine_field: clamp must be positive");
    ScalarField f;
    f.eval = [g, clamp](const Vec& x) { return std::clamp(dot(g, x), -clamp, clamp); };
    f.sup_bound = clamp;
    f.holder = HolderData{1.0, std::max(norm(g), clamp)};
    f.gradient = [g, clamp](const Vec& x) { return std::abs(dot(g, x)) < clamp ? g : Vec{}; };
    f.hessian = [](const Vec&) { return Mat{}; };
    f.increment = [g, clamp](const Vec& x, const Vec& y) {
        const double a = dot(g, x);
        const double b = dot(g, x + y);
        if (std::abs(a) < clamp && std::abs(b) < clamp) return dot(g, y);
        return std::clamp(b, -clamp, clamp) - std::clamp(a, -clamp, clamp);
    };
    f.name = "affine";
    return f;
}

ScalarField gauss_bump() {
    ScalarField f;
    f.eval = [](const Vec& x) { return std::exp(-dot(x, x)); };
    f.sup_bound = 1.0;
    // Lipschitz constant sqrt(2/e) is below 1 = sup, and L >= sup is the convention.
    f.holder = HolderData{1.0, 1.0};
    f.gradient = [](const Vec& x) { return (-2.0 * std::exp(-dot(x, x))) * x; };
    f.hessian = [](const Vec& x) {
        const double e = std::exp(-dot(x, x));
        Mat m{};
        for (int i = 0; i < kMaxDim; ++i)
            for (int j = 0; j < kMaxDim; ++j) m[i][j] = e * (4.0 * x[i] * x[j] - (i == j ? 2.0 : 0.0));
        return m;
    };
    f.increment = [](const Vec& x, const Vec& y) {
        return std::exp(-dot(x, x)) * std::expm1(-(2.0 * dot(x, y) + dot(y, y)));
    };
    f.name = "gauss-bump";
    return f;
}

ScalarField rational_field(int d) {
    ScalarField f;
    f.eval = [](const Vec& x) { return 1.0 / (1.0 + dot(x, x)); };
    f.sup_bound = 1.0;
    // |grad| = 2|x|/(1+|x|^2)^2 peaks at 3 sqrt(3)/8 < 1.
    f.holder = HolderData{1.0, 1.0};
    f.gradient = [](const Vec& x) {
        const double q = 1.0 + dot(x, x);
        return (-2.0 / (q * q)) * x;
    };
    f.hessian = [d](const Vec& x) {
        const double q = 1.0 + dot(x, x);
        Mat m{};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                m[i][j] = 8.0 * x[i] * x[j] / (q * q * q) - (i == j ? 2.0 / (q * q) : 0.0);
        return m;
    };
    f.increment = [](const Vec& x, const Vec& y) {
        const Vec z = x + y;
        return -(2.0 * dot(x, y) + dot(y, y)) / ((1.0 + dot(z, z)) * (1.0 + dot(x, x)));
    };
    f.name = "rational";
    return f;
}

ScalarField min_x2() {
    ScalarField f;
    f.eval = [](const Vec& x) { return std::min(x[0] * x[0], 1.0); };
    f.sup_bound = 1.0;
    f.holder = HolderData{1.0, 2.0};
    f.gradient = [](const Vec& x) {
        return std::abs(x[0]) < 1.0 ? Vec{2.0 * x[0], 0.0, 0.0} : Vec{};
    };
    f.hessian = [](const Vec& x) {
        Mat m{};
        if (std::abs(x[0]) < 1.0) m[0][0] = 2.0;
        return m;
    };
    f.increment = [](const Vec& x, const Vec& y) {
        const double z = x[0] + y[0];
        if (std::abs(x[0]) < 1.0 && std::abs(z) < 1.0) return y[0] * (2.0 * x[0] + y[0]);
        return std::min(z * z, 1.0) - std::min(x[0] * x[0], 1.0);
    };
    f.name = "minx2";
    return f;
}

ScalarField min_exp() {
    ScalarField f;
    f.eval = [](const Vec& x) { return std::min(std::exp(x[0]), 2.0); };
    f.sup_bound = 2.0;
    f.holder = HolderData{1.0, 2.0};
    f.gradient = [](const Vec& x) {
        return x[0] < std::log(2.0) ? Vec{std::exp(x[0]), 0.0, 0.0} : Vec{};
    };
    f.hessian = [](const Vec& x) {
        Mat m{};
        if (x[0] < std::log(2.0)) m[0][0] = std::exp(x[0]);
        return m;
    };
    f.increment = [](const Vec& x, const Vec& y) {
        const double cap = std::log(2.0);
        if (x[0] < cap && x[0] + y[0] < cap) return std::exp(x[0]) * std::expm1(y[0]);
        return std::min(std::exp(x[0] + y[0]), 2.0) - std::min(std::exp(x[0]), 2.0);
    };
    f.name = "minexp";
    return f;
}

ScalarField heaviside_s(double s, double cutoff) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("heaviside_s: requires 0 < s < 1");
    if (!(cutoff > 0.0)) throw ParameterError("heaviside_s: cutoff must be positive");
    ScalarField f;
    f.eval = [s, cutoff](const Vec& x) { return std::pow(std::clamp(x[0], 0.0, cutoff), s); };
    f.sup_bound = std::pow(cutoff, s);
    f.holder = HolderData{s, std::max(1.0, f.sup_bound)};
    f.increment = [s, cutoff](const Vec& x, const Vec& y) {
        const double a = x[0];
        const double b = x[0] + y[0];
        if (a > 0.0 && b > 0.0 && a < cutoff && b < cutoff) {
            return std::pow(a, s) * std::expm1(s * std::log1p(y[0] / a));
        }
        return std::pow(std::clamp(b, 0.0, cutoff), s) - std::pow(std::clamp(a, 0.0, cutoff), s);
    };
    f.name = "heaviside-s";
    return f;
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"const",  "affine", "gauss-bump", "rational",
                                                "minx2",  "minexp", "heaviside-s"};
    return names;
}

ScalarField add_fields(const ScalarField& a, const ScalarField& b) {
    ScalarField out;
    out.name = a.name + "+" + b.name;
    out.eval = [fa = a.eval, fb = b.eval](const Vec& x) { return fa(x) + fb(x); };
    out.increment = [a, b](const Vec& x, const Vec& y) { return a.diff(x, y) + b.diff(x, y); };
    out.sup_bound = a.sup_bound + b.sup_bound;
    if (a.holder && b.holder) {
        const double e = std::min(a.holder->exponent, b.holder->exponent);
        auto lift = [e](const ScalarField& f) {
            return f.holder->exponent > e ? std::max(f.holder->constant, 2.0 * f.sup_bound)
                                          : f.holder->constant;
        };
        out.holder = HolderData{e, lift(a) + lift(b)};
    }
    if (a.gradient && b.gradient) {
        out.gradient = [ga = a.gradient, gb = b.gradient](const Vec& x) { return ga(x) + gb(x); };
    }
    if (a.hessian && b.hessian) {
        out.hessian = [ha = a.hessian, hb = b.hessian](const Vec& x) {
            Mat m = ha(x);
            const Mat n = hb(x);
            for (int i = 0; i < kMaxDim; ++i) m[i] = m[i] + n[i];
            return m;
        };
    }
    return out;
}

ScalarField make_builtin(const std::string& name, int d, const FieldOptions& options) {
    if (name == "const") return constant_field(options.value);
    if (name == "affine") return affine_field(options.gradient, options.clamp);
    if (name == "gauss-bump") return gauss_bump();
    if (name == "rational") return rational_field(d);
    if (name == "minx2") return min_x2();
    if (name == "minexp") return min_exp();
    if (name == "heaviside-s") return heaviside_s(options.s, options.cutoff);
    throw ConfigurationError("unknown test function '" + name + "'");
}

}  // namespace fplap
