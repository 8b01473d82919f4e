#include <doctest.h>

#include "config.hpp"
#include "fplap/errors.hpp"
#include "fplap/io.hpp"
#include "selftest.hpp"

using namespace fplap;
using fplap::cli::IniConfig;

TEST_CASE("config parsing") {
    const IniConfig c = IniConfig::parse(
        "# comment\n[operator]\nd = 2\np = 3.5 # trailing\n; another comment\n[study]\nh = 0.1, 0.05\n"
        "point = 1 0; 0.5 0.25\nflag = yes\nname = heaviside-s\n");
    CHECK(c.integer("operator", "d", 1) == 2);
    CHECK(c.num("operator", "p") == 3.5);
    CHECK(c.num("operator", "s", 0.5) == 0.5);
    CHECK(c.numbers("study", "h") == std::vector<double>{0.1, 0.05});
    const auto pts = c.points("study", "point", 2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[1][1] == 0.25);
    CHECK(c.boolean("study", "flag", false));
    CHECK(c.str("study", "name") == "heaviside-s");
    CHECK_NOTHROW(c.check_unused());
}

TEST_CASE("config errors are precise") {
    CHECK_THROWS_AS(IniConfig::parse("[a\nx=1\n"), ConfigurationError);
    CHECK_THROWS_AS(IniConfig::parse("novalue\n"), ConfigurationError);
    CHECK_THROWS_AS(IniConfig::parse("[a]\nx=1\nx=2\n"), ConfigurationError);
    const IniConfig c = IniConfig::parse("[a]\nx = abc\ny = 1.5\nz = 1\n");
    CHECK_THROWS_AS(c.num("a", "x"), ConfigurationError);
    CHECK_THROWS_AS(c.integer("a", "y", 0), ConfigurationError);
    CHECK_THROWS_AS(c.num("a", "missing"), ConfigurationError);
    CHECK_THROWS_AS(c.points("a", "y", 2), ConfigurationError);
    try {
        c.check_unused();
        FAIL("expected unused-key error");
    } catch (const ConfigurationError& e) {
        CHECK(std::string(e.what()).find("[a] z") != std::string::npos);
    }
}

TEST_CASE("csv parsing") {
    const CsvTable t = parse_csv("a,b\n1.5e-3,nan\n2,inf\n");
    CHECK(t.rows.size() == 2);
    CHECK(t.column("a") == std::vector<double>{1.5e-3, 2.0});
    CHECK(std::isnan(t.column("b")[0]));
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
    CHECK_THROWS_AS(t.column("c"), Error);
    CHECK(parse_csv(format_sci(0.1) + "\n" + format_sci(0.1) + "\n").column(format_sci(0.1))[0] == 0.1);
}

TEST_CASE("self-test suites pass with small sample counts") {
    for (const auto& r : cli::run_selftests(99, 500)) CHECK_MESSAGE(r.passed, r.name);
}
