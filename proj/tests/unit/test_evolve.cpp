#include <doctest.h>

#include <cmath>

#include "fplap/errors.hpp"
#include "fplap/evolve.hpp"
#include "fplap/fields.hpp"

using namespace fplap;

namespace {

EvolutionProblem problem(ScalarField u0, ScalarField f, double T = 0.05) {
    EvolutionProblem p;
    p.u0 = std::move(u0);
    p.f = std::move(f);
    p.params = {1, 3.0, 0.5};
    p.T = T;
    return p;
}

SchemeConfig scheme(double h = 0.0625, double r = 0.25, Extension ext = Extension::zero()) {
    SchemeConfig c;
    c.grid.h = h;
    c.grid.d = 1;
    c.grid.rho_max = 2.0;
    c.grid.extension = ext;
    c.r = r;
    c.box_radius = 2.0;
    return c;
}

}  // namespace

TEST_CASE("single step examples") {
    const OperatorParams params{1, 3.0, 0.5};
    const WeightTable t = build_weights(scheme().grid, 0.25, params, WeightKind::W1);
    const BoxOperator op(t, 8, Extension::constant(2.0));
    const LatticeArray c(1, 0.0625, 8, 2.0);
    const LatticeArray zero(1, 0.0625, 8, 0.0);
    const LatticeArray out = step(c, op, zero, 1e-3);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 2.0);

    const BoxOperator op0(t, 8, Extension::zero());
    const LatticeArray one(1, 0.0625, 8, 1.0);
    const LatticeArray s = step(zero, op0, one, 1e-3);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(1e-3).epsilon(1e-15));
}

TEST_CASE("constant problem stays constant") {
    const EvolutionState st =
        run(problem(constant_field(0.7), constant_field(0.0)), scheme(0.0625, 0.25, Extension::constant(0.7)));
    CHECK(st.cfl_satisfied);
    for (const auto& U : st.snapshots)
        for (double v : U.values()) CHECK(v == 0.7);
    const MultiIndex a{3, 0, 0};
    CHECK(interpolate(st, a, 0.3 * st.times.back()) == 0.7);
}

TEST_CASE("interpolation between snapshots") {
    SchemeConfig cfg = scheme();
    cfg.thin = 1;
    const EvolutionState st = run(problem(gauss_bump(), constant_field(0.0)), cfg);
    REQUIRE(st.snapshots.size() >= 3);
    const MultiIndex a{1, 0, 0};
    const std::size_t i = st.snapshots[0].index(a);
    CHECK(interpolate(st, a, st.times[1]) == st.snapshots[1][i]);
    const double mid = 0.5 * (st.times[1] + st.times[2]);
    CHECK(interpolate(st, a, mid) == doctest::Approx(0.5 * (st.snapshots[1][i] + st.snapshots[2][i])).epsilon(1e-14));
    CHECK_THROWS_AS(interpolate(st, a, -0.1), ParameterError);
    CHECK_THROWS_AS(interpolate(st, a, 2.0 * st.times.back() + 1.0), ParameterError);
}

TEST_CASE("maximum principle and Hoelder margins on a short run") {
    SchemeConfig cfg = scheme();
    cfg.full_diagnostics = true;
    const EvolutionState st = run(problem(gauss_bump(), constant_field(0.0)), cfg);
    CHECK(st.diagnostics.linf_margin >= -1e-12);
    CHECK(st.diagnostics.holder_margin >= -1e-12);
    CHECK(st.diagnostics.max_increase <= 1e-15);
    CHECK(st.tau <= st.cfl.tau);
}

TEST_CASE("CFL branches and overrides") {
    const OperatorParams params{1, 3.0, 0.5};
    const CflInfo pw = cfl_tau(0.1, params, 0.5, 1.0, 0.0, 0.1, {});
    CHECK(pw.branch == CflBranch::Power);
    CHECK(pw.exponent == doctest::Approx(2.0 * params.s));
    const CflInfo lg = cfl_tau(0.1, params, 1.0, 1.0, 0.0, 0.1, {});
    CHECK(lg.branch == CflBranch::Log);
    CHECK(lg.tau == doctest::Approx(lg.K * 0.1 / std::abs(std::log(0.1))));
    CHECK(lg.C >= 1.0);
    CHECK_THROWS_AS(cfl_tau(1.0, params, 1.0, 1.0, 0.0, 0.1, {}), ParameterError);
    CflSpec user;
    user.mode = CflMode::UserValue;
    user.K = 0.5;
    CHECK(cfl_tau(0.1, params, 0.5, 1.0, 0.0, 0.1, user).tau == doctest::Approx(0.5 * 0.1));

    SchemeConfig cfg = scheme();
    cfg.tau = 10.0 * cfl_tau(cfg.r, params, 1.0, 1.0, 0.0, 0.05, {}).tau;
    CHECK_THROWS_AS(run(problem(gauss_bump(), constant_field(0.0)), cfg), CflError);
    cfg.allow_unstable = true;
    const EvolutionState st = run(problem(gauss_bump(), constant_field(0.0)), cfg);
    CHECK(st.overridden);
    CHECK_FALSE(st.cfl_satisfied);
}

TEST_CASE("problem validation") {
    EvolutionProblem p = problem(gauss_bump(), constant_field(0.0));
    p.params.p = 2.0;
    CHECK_THROWS(p.validate());
    ScalarField unbounded = gauss_bump();
    unbounded.sup_bound = std::numeric_limits<double>::infinity();
    CHECK_THROWS(problem(unbounded, constant_field(0.0)).validate());
}

TEST_CASE("time modulus of a constant problem") {
    const EvolutionProblem pr = problem(constant_field(0.4), constant_field(0.0));
    const SchemeConfig cfg = scheme(0.0625, 0.25, Extension::constant(0.4));
    const EvolutionState st = run(pr, cfg);
    const TimeModulusReport tm = time_modulus_check(st, pr, cfg);
    CHECK(tm.max_ratio == 0.0);
    for (double m : tm.max_modulus) CHECK(m == 0.0);
}

TEST_CASE("continuous dependence") {
    const EvolutionProblem a = problem(gauss_bump(), constant_field(0.0));
    EvolutionProblem b = a;
    b.u0 = add_fields(gauss_bump(), gauss_bump().scaled(1e-3));
    const PairedReport rep = continuous_dependence(a, b, scheme());
    CHECK(rep.delta_u0 == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(rep.max_excess <= 1e-12);
}

TEST_CASE("run artifacts") {
    const EvolutionProblem pr = problem(gauss_bump(), constant_field(0.0));
    const SchemeConfig cfg = scheme();
    const EvolutionState st = run(pr, cfg);
    const std::string meta = evolution_metadata_json(st, pr, cfg);
    CHECK(meta.find("\"branch\"") != std::string::npos);
    const std::string csv = evolution_snapshots_csv(st);
    CHECK(csv.rfind("i0,x0,t=", 0) == 0);
}
