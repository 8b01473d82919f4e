#include <doctest.h>

#include <cmath>
#include <random>

#include "fplap/discrete_op.hpp"
#include "fplap/errors.hpp"
#include "fplap/fields.hpp"

using namespace fplap;

namespace {

GridSpec grid(double h, int d, double rho_max, Extension ext) {
    GridSpec g;
    g.h = h;
    g.d = d;
    g.rho_max = rho_max;
    g.extension = ext;
    return g;
}

}  // namespace

TEST_CASE("lattice array indexing") {
    LatticeArray a(2, 0.1, 3);
    CHECK(a.size() == 49);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.index(a.multi_index(i)) == i);
    CHECK(a.contains({3, -3, 0}));
    CHECK_FALSE(a.contains({4, 0, 0}));
    CHECK(a.coordinate(a.index({1, -2, 0}))[1] == doctest::Approx(-0.2));
}

TEST_CASE("discrete operator on constants and odd data") {
    const OperatorParams params{1, 3.0, 0.5};
    const WeightTable t = build_weights(grid(0.025, 1, 2.0, Extension::caller()), 0.1, params, WeightKind::W1);
    const ScalarField c = constant_field(1.7);
    CHECK(apply_discrete(FieldSample::of_field(c), {3, 0, 0}, t, params.p) == 0.0);

    const ScalarField aff = affine_field({1.0, 0, 0}, 3.0);
    CHECK(std::abs(apply_discrete(FieldSample::of_field(aff), {0, 0, 0}, t, params.p)) < 1e-12);

    const LatticeArray arr = LatticeArray::sample(c, 1, 0.025, 100);
    const FieldSample fs = FieldSample::of_array(arr, Extension::constant(1.7));
    CHECK(apply_discrete(fs, {0, 0, 0}, t, params.p) == 0.0);

    const ConsistencyResult res = consistency_error(c, {0.5, 0, 0}, params, 0.025, 0.1, WeightKind::W2);
    CHECK(res.error == 0.0);
}

TEST_CASE("discrete operator is monotone") {
    const OperatorParams params{1, 3.0, 0.5};
    const double h = 0.05;
    const WeightTable t = build_weights(grid(h, 1, 2.0, Extension::zero()), 0.2, params, WeightKind::W1);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LatticeArray arr(1, h, 60);
    for (auto& v : arr.values()) v = u(rng);
    const FieldSample fs = FieldSample::of_array(arr, Extension::zero());
    const double base = apply_discrete(fs, {0, 0, 0}, t, params.p);
    for (int k : {-7, -1, 2, 3, 30}) {
        LatticeArray up = arr;
        up[up.index({k, 0, 0})] += 0.3;
        CHECK(apply_discrete(FieldSample::of_array(up, Extension::zero()), {0, 0, 0}, t, params.p) > base);
    }
    LatticeArray center = arr;
    center[center.index({0, 0, 0})] += 0.3;
    CHECK(apply_discrete(FieldSample::of_array(center, Extension::zero()), {0, 0, 0}, t, params.p) < base);
}

TEST_CASE("unresolvable samples") {
    const OperatorParams params{1, 3.0, 0.5};
    const WeightTable t = build_weights(grid(0.05, 1, 2.0, Extension::caller()), 0.2, params, WeightKind::W1);
    const LatticeArray arr(1, 0.05, 5, 1.0);
    FieldSample fs = FieldSample::of_array(arr, Extension::caller());
    CHECK_THROWS_AS(apply_discrete(fs, {0, 0, 0}, t, params.p), DomainCoverageError);
    CHECK_THROWS_AS(grid_index({0.013, 0, 0}, 0.05, 1), DomainCoverageError);
    CHECK(grid_index({0.15, 0, 0}, 0.05, 1)[0] == 3);
}

TEST_CASE("x_+^s: discrete values tend to zero with h") {
    const OperatorParams params{1, 4.0, 0.5};
    const ScalarField phi = heaviside_s(0.5, 1e14);
    double prev = 1e300;
    for (int k = 5; k <= 8; ++k) {
        const double h = std::ldexp(1.0, -k);
        ConsistencyOptions o;
        o.rho_max = 9.0;
        o.exact = 0.0;
        const double e = consistency_error(phi, {1, 0, 0}, params, h, 4.0 * h, WeightKind::W1, o).error;
        CHECK(e < prev);
        prev = e;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("W1 and W2 approach each other as h shrinks at fixed r") {
    const OperatorParams params{1, 3.0, 0.5};
    const ScalarField phi = rational_field(1);
    std::vector<double> gaps;
    for (double h : {0.025, 0.0125, 0.00625}) {
        ConsistencyOptions o;
        o.exact = 0.0;
        const double a = consistency_error(phi, {0.5, 0, 0}, params, h, 0.2, WeightKind::W1, o).discrete;
        const double b = consistency_error(phi, {0.5, 0, 0}, params, h, 0.2, WeightKind::W2, o).discrete;
        gaps.push_back(std::abs(a - b));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
}
