#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fplap/errors.hpp"
#include "fplap/fields.hpp"
#include "fplap/kernel.hpp"

using namespace fplap;

namespace {

ScalarField square_1d() {
    ScalarField f;
    f.eval = [](const Vec& x) { return x[0] * x[0]; };
    f.name = "x^2";
    return f;
}

}  // namespace

TEST_CASE("jp values") {
    CHECK(jp(2.0, 3.0) == 4.0);
    CHECK(jp(0.0, 1.5) == 0.0);
    CHECK(jp(-2.0, 3.0) == -4.0);
    CHECK(jp(3.0, 2.0) == 3.0);
    CHECK_THROWS_AS(jp(1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(jp(1.0, 0.5), ParameterError);
}

TEST_CASE("jp_unchecked agrees with jp") {
    for (double p : {1.5, 2.0, 2.5, 3.0, 4.0, 5.5})
        for (double x : {-3.0, -0.2, 0.0, 0.7, 2.0})
            CHECK(jp_unchecked(x, p) == doctest::Approx(jp(x, p)).epsilon(1e-15));
}

TEST_CASE("dy_operator examples") {
    const ScalarField lin = affine_field({1.0, 0.0, 0.0}, 100.0);
    for (double x : {-1.0, 0.3, 2.0}) CHECK(dy_operator(lin, {x, 0, 0}, {0.25, 0, 0}, 3.0) == 0.0);

    for (double r : {0.1, 0.5, 1.0})
        CHECK(dy_operator(square_1d(), {0, 0, 0}, {r, 0, 0}, 3.0) == doctest::Approx(2.0 * r));

    // Direct arithmetic on the two differences.
    const ScalarField rat = rational_field(1);
    const double f = [](double x) { return 1.0 / (1.0 + x * x); }(1.0);
    const double fp = 1.0 / (1.0 + 1.1 * 1.1), fm = 1.0 / (1.0 + 0.9 * 0.9);
    const double expect = ((fp - f) + (fm - f)) / 0.01;
    CHECK(dy_operator(rat, {1, 0, 0}, {0.1, 0, 0}, 2.0) == doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(dy_operator(rat, {1, 0, 0}, {0, 0, 0}, 2.0), ParameterError);
}

TEST_CASE("sphere constants") {
    for (double p : {1.5, 2.0, 3.0, 4.5}) CHECK(kappa_pd(p, 1) == doctest::Approx(2.0));
    for (int d = 1; d <= 3; ++d) CHECK(kappa_pd(2.0, d) == doctest::Approx(2.0 * d).epsilon(1e-12));
    // average of |cos|^3 over the circle is 4/(3 pi)
    CHECK(kappa_pd(3.0, 2) == doctest::Approx(1.5 * std::numbers::pi).epsilon(1e-12));
    CHECK(sphere_average_abs_y1_pow(3.0, 2) == doctest::Approx(4.0 / (3.0 * std::numbers::pi)).epsilon(1e-12));

    CHECK(a_spd(0.5, 2.0, 1) == doctest::Approx(0.5));
    for (double p : {1.5, 2.0, 3.7}) CHECK(a_pd(p, 1) == doctest::Approx(1.0));
    // int_{S^1} |cos|^3 = 8/3, p(1-s) = 1.5
    CHECK(a_spd(0.5, 3.0, 2) == doctest::Approx(0.5625).epsilon(1e-12));
}

TEST_CASE("gamma exponent") {
    const RateRegime uni{RateTag::Uniform, 0.05};
    CHECK(gamma_exponent(4.0, uni) == 2.0);
    CHECK(gamma_exponent(2.0, uni) == 2.0);
    CHECK(gamma_exponent(2.5, uni) == doctest::Approx(0.5));
    CHECK(gamma_exponent(6.0, uni) == 2.0);
    CHECK_THROWS_AS(gamma_exponent(1.5, uni), ParameterError);

    CHECK(gamma_exponent(2.5, {RateTag::NonvanishingGradient, 0.1}) == doctest::Approx(1.4));
    CHECK(gamma_exponent(3.0, {RateTag::NonvanishingGradient, 0.1}) == 2.0);
    CHECK(gamma_exponent(1.5, {RateTag::NonvanishingGradient, 0.05}) == doctest::Approx(0.45));
}

TEST_CASE("summability scale") {
    CHECK(s_nu(1.0, 0.1, 0.5, 4.0) == doctest::Approx(10.0));
    CHECK(s_nu(2.0, 0.1, 0.5, 4.0) == doctest::Approx(2.302585093).epsilon(1e-9));
    CHECK(s_nu(3.0, 0.1, 0.5, 4.0) == 1.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(OperatorParams({1, 1.0, 0.5}).validate(), ParameterError);
    CHECK_THROWS_AS(OperatorParams({1, 2.0, 0.0}).validate(), ParameterError);
    CHECK_THROWS_AS(OperatorParams({1, 2.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(OperatorParams({0, 2.0, 0.5}).validate(), ParameterError);
    CHECK_NOTHROW(OperatorParams({3, 1.2, 0.9}).validate());
}

TEST_CASE("jp and dy property suites on randomized samples") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> up(1.05, 6.0), ux(-5.0, 5.0), ul(0.05, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const double p = up(rng), x = ux(rng), l = ul(rng);
        CHECK(jp(-x, p) == -jp(x, p));
        CHECK(jp(l * x, p) == doctest::Approx(std::pow(l, p - 1.0) * jp(x, p)).epsilon(1e-12));
        // D_y is even in y
        const ScalarField phi = gauss_bump().translated({ux(rng) * 0.2, 0, 0});
        const Vec y{0.1 + 0.5 * ul(rng) / 5.0, 0, 0};
        CHECK(dy_operator(phi, {x * 0.3, 0, 0}, y, p) ==
              doctest::Approx(dy_operator(phi, {x * 0.3, 0, 0}, -y, p)).epsilon(1e-13));
    }
}
