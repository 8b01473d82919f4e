#include <doctest.h>

#include <cmath>
#include <random>

#include "fplap/errors.hpp"
#include "fplap/expansion.hpp"
#include "fplap/fields.hpp"

using namespace fplap;

namespace {

const QuadSpec tight{1e-12, 1e-12, 8000, 0.0};

ScalarField square_1d() {
    ScalarField f;
    f.eval = [](const Vec& x) { return x[0] * x[0]; };
    f.gradient = [](const Vec& x) { return Vec{2.0 * x[0], 0, 0}; };
    f.hessian = [](const Vec&) { return Mat{Vec{2.0, 0, 0}, Vec{}, Vec{}}; };
    f.name = "x^2";
    return f;
}

// x_1 + c x_1^2 + e |x|^2 / 2
ScalarField poly_2d(double c, double e) {
    ScalarField f;
    f.eval = [c, e](const Vec& x) { return x[0] + c * x[0] * x[0] + 0.5 * e * dot(x, x); };
    f.gradient = [c, e](const Vec& x) { return Vec{1.0 + 2.0 * c * x[0] + e * x[0], e * x[1], 0}; };
    f.hessian = [c, e](const Vec&) { return Mat{Vec{2.0 * c + e, 0, 0}, Vec{0, e, 0}, Vec{}}; };
    f.name = "poly";
    return f;
}

}  // namespace

TEST_CASE("local expansions vanish on affine fields") {
    const ScalarField aff = affine_field({0.7, -0.3, 0.0}, 100.0);
    for (int d = 1; d <= 2; ++d) {
        CHECK(std::abs(mvp_local_surface(aff, {0.2, 0.1, 0}, 0.1, 3.0, d, tight).value) < 1e-10);
        // the r^-p normalisation amplifies the quadrature error; judge against the reported bound
        const ExpansionResult vol = mvp_local_volume(aff, {0.2, 0.1, 0}, 0.1, 3.0, d, tight);
        CHECK(std::abs(vol.value) <= 2.0 * vol.quadrature_error + 1e-12);
    }
}

TEST_CASE("local expansions of x^2 with p = 2") {
    CHECK(mvp_local_surface(square_1d(), {1, 0, 0}, 0.1, 2.0, 1, tight).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mvp_local_volume(square_1d(), {1, 0, 0}, 0.1, 2.0, 1, tight).value ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("local surface expansion in d = 2 against the closed form") {
    // x_1 + x_1^2 at 0, p = 3: Delta_3 = |g| (tr H + (p-2) e.He) = 4. Independent quadrature gives 4.
    const ScalarField phi = poly_2d(1.0, 0.0);
    CHECK(reference_plap(phi, {0, 0, 0}, 3.0, 2) == doctest::Approx(4.0));
    CHECK(mvp_local_surface(phi, {0, 0, 0}, 0.05, 3.0, 2, tight).value == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("local surface and volume agree to O(r^2) for p = 2") {
    const ScalarField phi = rational_field(1);
    for (double r : {0.1, 0.05}) {
        const double a = mvp_local_surface(phi, {0.7, 0, 0}, r, 2.0, 1, tight).value;
        const double b = mvp_local_volume(phi, {0.7, 0, 0}, r, 2.0, 1, tight).value;
        CHECK(std::abs(a - b) < 10.0 * r * r);
    }
}

TEST_CASE("reference p-Laplacian from derivatives") {
    CHECK(reference_plap(square_1d(), {1, 0, 0}, 3.0, 1) == doctest::Approx(8.0));
    CHECK(reference_plap(affine_field({1, 2, 0}, 100.0), {0, 0, 0}, 3.0, 2) == 0.0);
    CHECK(reference_plap(poly_2d(0.0, 1.0), {0, 0, 0}, 3.0, 2) == doctest::Approx(3.0));
    CHECK(plap_from_derivatives({0, 0, 0}, Mat{Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{}}, 3.0, 2) == 0.0);
    CHECK(plap_from_derivatives({0, 0, 0}, Mat{Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{}}, 2.0, 2) == 2.0);
    CHECK_THROWS_AS(plap_from_derivatives({0, 0, 0}, Mat{}, 1.5, 1), ContractError);
    CHECK_THROWS_AS(reference_plap(heaviside_s(0.5, 10.0), {1, 0, 0}, 3.0, 1), ContractError);
}

TEST_CASE("fractional expansions vanish on constants") {
    const ScalarField c = constant_field(2.5);
    const OperatorParams params{1, 3.0, 0.5};
    CHECK(mvp_fractional(c, {0.3, 0, 0}, 0.1, params, tight).value == 0.0);
    CHECK(bs_expansion(c, {0.3, 0, 0}, 0.1, params, tight).value == 0.0);
    CHECK(reference_fraclap(c, {0.3, 0, 0}, params, tight).value == 0.0);
}

TEST_CASE("fractional expansion needs a sup bound") {
    ScalarField f = square_1d();
    CHECK_THROWS_AS(mvp_fractional(f, {0, 0, 0}, 0.1, {1, 3.0, 0.5}, tight), ContractError);
}

TEST_CASE("x_+^s is annihilated for x > 0") {
    const ScalarField phi = heaviside_s(0.5, 1e14);
    const OperatorParams params{1, 4.0, 0.5};
    const QuadResult ref = reference_fraclap(phi, {1, 0, 0}, params, tight);
    // Freezing the field at C = 1e14 leaves -(2 - 1/2) C^{-1/2} of the kernel integral.
    const double truncation = -1.5 / std::sqrt(1e14);
    CHECK(std::abs(ref.value - truncation) <= 10.0 * ref.error + 1e-12);
    const double v = mvp_fractional(phi, {1, 0, 0}, 0.05, params, tight).value;
    // gamma + p(1-s) = 4; the observed constant is below 1
    CHECK(std::abs(v) < std::pow(0.05, 4.0));
}

TEST_CASE("oracle agrees with an independent high-precision value") {
    // 1/(1+x^2) at x = 1, p = 3, s = 0.5; frozen from a 30-digit evaluation.
    const QuadResult ref = reference_fraclap(rational_field(1), {1, 0, 0}, {1, 3.0, 0.5}, tight);
    CHECK(ref.value == doctest::Approx(0.1775977344983336).epsilon(1e-11));
}

TEST_CASE("quadratic-model identities") {
    SUBCASE("zero gradient, p > 2") {
        const IdentityPair pr = identity_check_J2({0, 0, 0}, Mat{Vec{1, 0, 0}, Vec{}, Vec{}}, 0.3, 3.0, 1);
        CHECK(pr.lhs == 0.0);
        CHECK(pr.rhs == 0.0);
    }
    SUBCASE("d = 1 is exact to rounding") {
        for (double p : {2.0, 2.7, 4.0}) {
            const IdentityPair pr = identity_check_J2({1.3, 0, 0}, Mat{Vec{-0.8, 0, 0}, Vec{}, Vec{}}, 0.4, p, 1);
            const double expect = (p - 1.0) * std::pow(1.3, p - 2.0) * -0.8 * std::pow(0.4, p);
            CHECK(pr.lhs == doctest::Approx(expect).epsilon(1e-14));
            CHECK(pr.rhs == doctest::Approx(expect).epsilon(1e-14));
        }
    }
    SUBCASE("d = 2, g = e1, H = I, p = 3") {
        const Mat I{Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{}};
        const IdentityPair pr = identity_check_J2({1, 0, 0}, I, 0.5, 3.0, 2, tight);
        CHECK(pr.lhs == doctest::Approx(pr.rhs).epsilon(1e-10));
        const IdentityPair vol = identity_check_J2_volume({1, 0, 0}, I, 0.5, 3.0, 2, tight);
        CHECK(vol.lhs == doctest::Approx(vol.rhs).epsilon(1e-8));
        const IdentityPair j1 = identity_check_J1({1, 0, 0}, I, 0.5, {2, 3.0, 0.5}, tight);
        CHECK(j1.lhs == doctest::Approx(j1.rhs).epsilon(1e-8));
    }
    SUBCASE("randomized") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> up(2.0, 5.0), ur(0.05, 2.0), um(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            const int d = 1 + (i % 2);
            const double p = up(rng), r = ur(rng);
            Vec g{um(rng), d == 2 ? um(rng) : 0.0, 0.0};
            if (norm(g) < 0.1) g[0] = 1.0;
            Mat H{};
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) H[a][b] = H[b][a] = um(rng);
            const IdentityPair pr = identity_check_J2(g, H, r, p, d, {1e-11, 1e-11, 20000, 0.0});
            CHECK(pr.lhs == doctest::Approx(pr.rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("expansion kind names") {
    for (auto k : {ExpansionKind::LocalSurface, ExpansionKind::LocalVolume, ExpansionKind::Fractional,
                   ExpansionKind::BucurSquassina})
        CHECK(expansion_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(expansion_kind_from_string("Mrs"), ConfigurationError);
}
