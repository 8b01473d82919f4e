#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fplap/expansion.hpp"
#include "fplap/fields.hpp"
#include "fplap/kernel.hpp"
#include "fplap/study.hpp"

namespace fplap::cli {

namespace {

double rel_dev(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

Vec random_vec(std::mt19937_64& rng, int d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec v{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) v[k] = u(rng);
    return v;
}

}  // namespace

CheckResult check_eoc_synthetic() {
    CheckResult res{"eoc synthetic power laws", true, 0.0, 1e-10, 0};
    const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125, 0.00625};
    for (double k : {0.5, 1.0, 2.0, 3.5}) {
        std::vector<double> e;
        for (double h : hs) e.push_back(0.7 * std::pow(h, k));
        const EocReport rep = eoc(hs, e);
        res.worst = std::max(res.worst, std::abs(rep.slope - k));
        ++res.samples;
    }
    res.passed = res.worst <= res.tolerance;
    return res;
}

CheckResult check_eoc_mixed() {
    CheckResult res{"eoc mixed two-term model", false, 0.0, 0.0, 1};
    const std::vector<double> hs{0.1, 0.05, 0.025};
    std::vector<double> e;
    for (double h : hs) e.push_back(h * h + 5.0 * h * h * h);
    const EocReport rep = eoc(hs, e);
    res.worst = rep.slope;
    res.passed = rep.slope > 2.0 && rep.slope < 3.0 && rep.residual > 0.0;
    return res;
}

CheckResult check_jp_properties(std::uint64_t seed, int samples) {
    CheckResult res{"jp antisymmetry and homogeneity", true, 0.0, 1e-12, samples};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> up(1.05, 6.0), ux(-10.0, 10.0), ul(0.01, 10.0);
    for (int i = 0; i < samples; ++i) {
        const double p = up(rng), x = ux(rng), l = ul(rng);
        const double anti = std::abs(jp(-x, p) + jp(x, p));
        const double homo = rel_dev(jp(l * x, p), std::pow(l, p - 1.0) * jp(x, p));
        res.worst = std::max({res.worst, anti, homo});
    }
    res.passed = res.worst <= res.tolerance;
    return res;
}

CheckResult check_dy_properties(std::uint64_t seed, int samples) {
    CheckResult res{"dy antisymmetry, homogeneity, evenness, affine annihilation", true, 0.0, 1e-12,
                    samples};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> up(1.05, 6.0), ul(0.05, 5.0);
    std::uniform_int_distribution<int> ud(1, 3);
    for (int i = 0; i < samples; ++i) {
        const int d = ud(rng);
        const double p = up(rng), l = ul(rng);
        const Vec x = random_vec(rng, d, -2.0, 2.0);
        Vec y = random_vec(rng, d, -1.0, 1.0);
        if (norm(y) < 1e-3) y[0] = 0.5;
        const ScalarField phi = gauss_bump().translated(random_vec(rng, d, -1.0, 1.0));

        const double base = dy_operator(phi, x, y, p);
        const double neg = dy_operator(phi.scaled(-1.0), x, y, p);
        const double hom = dy_operator(phi.scaled(l), x, y, p);
        const double even = dy_operator(phi, x, -y, p);
        const double scale = (std::abs(jp(phi.diff(x, y), p)) + std::abs(jp(phi.diff(x, -y), p))) /
                             std::pow(norm(y), p) + 1e-300;
        res.worst = std::max(res.worst, std::abs(neg + base) / scale);
        res.worst = std::max(res.worst, std::abs(hom - std::pow(l, p - 1.0) * base) /
                                            (std::pow(l, p - 1.0) * scale));
        res.worst = std::max(res.worst, std::abs(even - base) / scale);

        const ScalarField aff = affine_field(random_vec(rng, d, -3.0, 3.0), 1e6);
        const double aff_scale = 2.0 * std::abs(jp(aff.diff(x, y), p)) / std::pow(norm(y), p) + 1e-300;
        res.worst = std::max(res.worst, std::abs(dy_operator(aff, x, y, p)) / aff_scale);
    }
    res.passed = res.worst <= res.tolerance;
    return res;
}

CheckResult check_identity_J2(std::uint64_t seed, int cases) {
    CheckResult res{"quadratic-model identity", true, 0.0, 1e-8, cases};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> up(2.0, 5.0), ur(0.05, 2.0), um(-2.0, 2.0);
    double worst_1d = 0.0;
    for (int i = 0; i < cases; ++i) {
        const int d = 1 + (i % 2);
        const double p = up(rng), r = ur(rng);
        Vec g = random_vec(rng, d, -2.0, 2.0);
        if (norm(g) < 0.1) g[0] = 1.0;
        Mat H{};
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) H[a][b] = H[b][a] = um(rng);
        const IdentityPair pair = identity_check_J2(g, H, r, p, d, {1e-11, 1e-11, 20000, 0.0});
        const double dev = rel_dev(pair.lhs, pair.rhs);
        if (d == 1) worst_1d = std::max(worst_1d, dev);
        res.worst = std::max(res.worst, dev);
    }
    res.passed = res.worst <= res.tolerance && worst_1d <= 1e-13;
    return res;
}

std::vector<CheckResult> run_selftests(std::uint64_t seed, int samples) {
    return {check_eoc_synthetic(), check_eoc_mixed(), check_jp_properties(seed, samples),
            check_dy_properties(seed + 1, samples), check_identity_J2(seed + 2, 50)};
}

}  // namespace fplap::cli
