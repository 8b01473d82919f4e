#include <doctest.h>

#include <cmath>

#include "fplap/errors.hpp"
#include "fplap/fields.hpp"
#include "fplap/io.hpp"
#include "fplap/study.hpp"

using namespace fplap;

TEST_CASE("eoc on synthetic data") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    std::vector<double> e2, e35, mix;
    for (double x : h) {
        e2.push_back(3.0 * x * x);
        e35.push_back(0.2 * std::pow(x, 3.5));
        mix.push_back(x * x + 4.0 * x * x * x);
    }
    const EocReport a = eoc(h, e2);
    CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a.residual < 1e-12);
    CHECK(std::abs(eoc(h, e35).slope - 3.5) < 1e-10);
    const EocReport m = eoc(h, mix);
    CHECK(m.slope > 2.0);
    CHECK(m.slope < 3.0);
    CHECK(m.residual > 0.0);
}

TEST_CASE("eoc uses the finest points and flags zeros") {
    const std::vector<double> h{0.4, 0.2, 0.1, 0.05, 0.025};
    const std::vector<double> e{1.0, 0.3, 0.01, 0.0025, 0.000625};
    const EocReport r = eoc(h, e, 3);
    CHECK(r.fitted_points == 3);
    CHECK(r.slope == doctest::Approx(2.0).epsilon(1e-12));

    const std::vector<double> z{0.01, 0.0025, 0.0, 0.000625 / 4.0};
    const std::vector<double> hz{0.1, 0.05, 0.025, 0.0125};
    const EocReport rz = eoc(hz, z);
    CHECK(rz.zero_errors == 1);
    CHECK(rz.fitted_points == 3);

    CHECK_THROWS_AS(eoc(std::vector<double>{0.1, 0.05}, std::vector<double>{1.0, 0.5}), InsufficientDataError);
    CHECK_THROWS_AS(eoc(std::vector<double>{0.1, 0.05, 0.025}, std::vector<double>{1.0, 0.0, 0.0}),
                    InsufficientDataError);
    CHECK_THROWS_AS(eoc(std::vector<double>{0.1, 0.2, 0.05}, std::vector<double>{1.0, 0.5, 0.1}), ParameterError);
}

TEST_CASE("mu selection examples") {
    const RateRegime nv{RateTag::NonvanishingGradient, 0.05};
    MuChoice c = mu_select({1, 4.0, 0.5}, nv);
    CHECK(c.mu == 1.0);
    CHECK(c.order == 1.0);
    c = mu_select({1, 3.5, 0.9}, nv);
    CHECK(c.mu == doctest::Approx(0.25));
    CHECK(c.order == doctest::Approx(0.5875));
    c = mu_select({1, 1.5, 0.5}, nv);
    CHECK(c.mu == doctest::Approx(0.5 / 1.95));
    CHECK(c.order == doctest::Approx(0.5 * (1.0 - 0.75 / 1.95)));
    c = mu_select({1, 3.0, 0.3}, nv);
    CHECK(c.mu == doctest::Approx(1.0 / (2.0 + 2.1)));
    CHECK(c.order == 1.0);
}

TEST_CASE("mu selection stays in (0, 1]") {
    for (double p = 1.1; p < 8.0; p += 0.23)
        for (double s = 0.05; s < 1.0; s += 0.07)
            for (auto tag : {RateTag::Uniform, RateTag::NonvanishingGradient}) {
                if (tag == RateTag::Uniform && p < 2.0) continue;
                const MuChoice c = mu_select({1, p, s}, {tag, 0.05});
                CHECK(c.mu > 0.0);
                CHECK(c.mu <= 1.0);
                CHECK(c.order > 0.0);
            }
}

TEST_CASE("expected expansion orders") {
    const RateRegime nv{RateTag::NonvanishingGradient, 0.05};
    const RateRegime uni{RateTag::Uniform, 0.05};
    CHECK(expected_expansion_order(ExpansionKind::Fractional, {1, 3.0, 0.5}, nv, true) == doctest::Approx(3.5));
    CHECK(expected_expansion_order(ExpansionKind::Fractional, {1, 2.5, 0.5}, uni) == doctest::Approx(1.75));
    CHECK(expected_expansion_order(ExpansionKind::LocalSurface, {1, 2.5, 0.5}, uni) == doctest::Approx(0.5));
    CHECK(expected_expansion_order(ExpansionKind::BucurSquassina, {1, 3.0, 0.25}, nv) == doctest::Approx(1.5));
}

TEST_CASE("expansion sweep on the zero-gradient example") {
    const std::vector<double> rs{0.2, 0.1, 0.05, 0.025, 0.0125};
    const EocReport r = expansion_sweep(min_x2(), {0, 0, 0}, {1, 2.5, 0.5}, ExpansionKind::Fractional, rs);
    CHECK(r.slope == doctest::Approx(1.75).epsilon(0.02));
    CHECK_FALSE(r.oracle_limited);
}

TEST_CASE("constant refinement gives zero differences") {
    EvolutionProblem pr;
    pr.u0 = constant_field(0.5);
    pr.f = constant_field(0.0);
    pr.params = {1, 3.0, 0.5};
    pr.T = 0.02;
    SchemeConfig cfg;
    cfg.grid.h = 0.125;
    cfg.grid.extension = Extension::constant(0.5);
    cfg.r = 0.5;
    cfg.box_radius = 1.0;
    const RefinementReport rep = refinement_cauchy(pr, cfg, {2, 1.0, 1.0});
    REQUIRE(rep.differences.size() == 1);
    CHECK(rep.differences[0] == 0.0);
    CHECK_THROWS_AS(refinement_cauchy(pr, cfg, {1, 1.0, 1.0}), ParameterError);
}

TEST_CASE("fig1 table") {
    const std::vector<double> ps{1.5, 2.5, 4.0};
    const std::vector<double> ss{0.5};
    const auto uni = fig1_table(ps, ss, {RateTag::Uniform, 0.05});
    REQUIRE(uni.size() == 2);
    CHECK(uni[0].nu == doctest::Approx(0.5 + 1.25));
    CHECK(uni[1].nu == doctest::Approx(4.0));
    CHECK(fig1_table(ps, ss, {RateTag::NonvanishingGradient, 0.05}).size() == 3);
}

TEST_CASE("eoc csv round trip") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    const std::vector<double> e{1.234567890123e-3, 3.1e-4, 7.7e-5};
    EocReport r = eoc(h, e);
    r.expected_slope = 2.0;
    const CsvTable t = parse_csv(eoc_csv(r));
    REQUIRE(t.header == std::vector<std::string>{"abscissa", "error", "expected_order", "fitted_order", "residual"});
    CHECK(t.column("abscissa") == h);
    CHECK(t.column("error") == e);
    for (double v : t.column("fitted_order")) CHECK(v == r.slope);
    CHECK(eoc_csv(r) == eoc_csv(r));
    CHECK(eoc_json(r, "x").find("\"fitted_order\"") != std::string::npos);
}
