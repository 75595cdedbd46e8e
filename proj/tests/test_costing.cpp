#include "enplan/costing.hpp"
#include "enplan/error.hpp"
#include "enplan/system.hpp"

#include <doctest.h>

#include <cmath>

using namespace enplan;

namespace {

Technology tech(double overnight, double fom, double lifetime)
{
    Technology t;
    t.id = "t";
    t.output_carrier = "elec";
    t.overnight_cost_power = overnight;
    t.fixed_om = fom;
    t.lifetime = lifetime;
    return t;
}

} // namespace

TEST_CASE("annuity factor closed form")
{
    CHECK(std::fabs(annuity_factor(0.02, 25) - 0.0512204) < 1e-6);
    CHECK(std::fabs(annuity_factor(0.02, 60) - 0.0287680) < 1e-6);
    CHECK(annuity_factor(0.0, 10) == 0.1);
    // r / (1 - (1+r)^-n) evaluated directly.
    for (double r : {0.01, 0.05, 0.08}) {
        for (double n : {1.0, 18.0, 30.0}) {
            CHECK(annuity_factor(r, n) == doctest::Approx(r / (1.0 - std::pow(1.0 + r, -n))).epsilon(1e-12));
        }
    }
    CHECK(annuity_factor(1e-12, 20) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK_THROWS_AS(annuity_factor(0.02, 0.0), Error);
    CHECK_THROWS_AS(annuity_factor(-0.01, 10), Error);
}

TEST_CASE("annualised technology cost")
{
    CostingConfig cfg;
    const auto pv = annualize_technology(tech(317.0, 6.34, 25.0), cfg);
    CHECK(pv.power / 1e6 == doctest::Approx(22.57).epsilon(5e-4));
    CHECK(pv.energy == 0.0);

    const auto turbine = annualize_technology(tech(185.0, 3.3, 30.0), cfg);
    CHECK(turbine.power / 1e6 == doctest::Approx(11.56).epsilon(5e-4));

    const auto om_only = annualize_technology(tech(0.0, 4.0, 17.0), cfg);
    CHECK(om_only.power == doctest::Approx(4.0e6));

    Technology battery = tech(74.7, 1.1, 18.0);
    battery.kind = TechKind::storage;
    battery.overnight_cost_energy = 164.1;
    const auto b = annualize_technology(battery, cfg);
    CHECK(b.energy == doctest::Approx(164.1 * annuity_factor(0.02, 18) * 1e6));
}

TEST_CASE("grid unit cost and line expansion cost")
{
    CostingConfig cfg;
    const double derived = grid_unit_cost_from_line(480000.0, 0.175);
    CHECK(derived == doctest::Approx(2.7428e6).epsilon(1e-3));
    // Quoted to three significant digits.
    CHECK(std::round(derived / 1e4) * 1e4 == cfg.grid_unit_cost);

    CHECK(line_expansion_cost(100.0, cfg) / 1e6 == doctest::Approx(7.88).epsilon(1e-3));
    CHECK(line_expansion_cost(200.0, cfg) == doctest::Approx(2.0 * line_expansion_cost(100.0, cfg)));
    CHECK_THROWS_AS(line_expansion_cost(0.0, cfg), Error);
    CHECK_THROWS_AS(grid_unit_cost_from_line(480000.0, 0.0), Error);
}
