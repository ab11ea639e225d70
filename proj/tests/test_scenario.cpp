#include <doctest.h>

#include <cmath>

#include "tubechannel/scenario.hpp"

using namespace tubechannel;

namespace {
Scenario make(double rho, double v, double d) {
    Scenario s;
    s.rho = rho;
    s.v = v;
    s.d_coef = d;
    return s;
}
}  // namespace

TEST_CASE("reynolds") {
    CHECK(reynolds(make(10, 1000, 700)) == doctest::Approx(0.01));
    CHECK(reynolds(make(20, 3000, 100)) == doctest::Approx(0.06));
    CHECK(reynolds(make(10, 1e-12, 700)) == doctest::Approx(0.0));
}

TEST_CASE("peclet") {
    CHECK(peclet(make(10, 1000, 700)) == doctest::Approx(14.2857).epsilon(1e-5));
    CHECK(peclet(make(20, 2000, 400)) == doctest::Approx(100.0));
    CHECK(peclet(make(10, 1000, 1e300)) < 1e-290);
}

TEST_CASE("scaling properties") {
    const Scenario s = make(10, 1000, 700);
    for (double c : {0.5, 3.0, 17.0}) {
        Scenario v = s;
        v.v *= c;
        CHECK(reynolds(v) == doctest::Approx(c * reynolds(s)));
        CHECK(peclet(v) == doctest::Approx(c * peclet(s)));
        v.d_coef *= c;
        CHECK(peclet(v) == doctest::Approx(peclet(s)));
    }
}

TEST_CASE("validate_regime") {
    const auto r3 = validate_regime(reference_example(3).scenario);
    CHECK(r3.laminar);
    CHECK(r3.flow_dominated);
    CHECK(r3.reynolds == doctest::Approx(0.03));
    CHECK(r3.peclet == doctest::Approx(300.0));
    CHECK(regime_warnings(r3).empty());

    Scenario big = make(1e6, 1e4, 400);
    big.d1 = 1e7;
    big.d2 = 1e7 + 20;
    const auto rb = validate_regime(big);
    CHECK_FALSE(rb.laminar);
    CHECK_FALSE(regime_warnings(rb).empty());

    const Scenario edge = make(10, 1000, 1000);  // Pe = 10
    CHECK(validate_regime(edge, 10.0).flow_dominated);
    CHECK_FALSE(validate_regime(edge, 10.5).flow_dominated);
    CHECK_THROWS_AS(validate_regime(edge, 0.0), std::invalid_argument);
}

TEST_CASE("invalid scenarios list every violation") {
    Scenario s;
    s.rho = -1;
    s.d_coef = 0;
    s.d2 = s.d1 - 5;
    try {
        validate(s);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.violations().size() >= 3);
    }
    CHECK_THROWS_AS(validate_regime(s), ScenarioError);
}

TEST_CASE("simulation accepts degenerate receiver and zero diffusion") {
    Scenario s;
    s.d2 = s.d1;
    CHECK(simulation_violations(s).empty());
    CHECK_FALSE(scenario_violations(s).empty());
    s.d_coef = 0.0;
    CHECK(simulation_violations(s).empty());
    s.v = 0.0;
    CHECK_FALSE(simulation_violations(s).empty());
}

TEST_CASE("reference table rows") {
    const auto& rows = reference_examples();
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        INFO("example " << r.id);
        CHECK(scenario_violations(r.scenario).empty());
        CHECK(std::round(reynolds(r.scenario) * 100.0) / 100.0 == doctest::Approx(r.reynolds));
        CHECK(std::fabs(peclet(r.scenario) - r.peclet) <= 1e-4);
        CHECK(r.scenario.d2 - r.scenario.d1 == doctest::Approx(20.0));
    }
    CHECK_THROWS_AS(reference_example(7), std::out_of_range);
}
