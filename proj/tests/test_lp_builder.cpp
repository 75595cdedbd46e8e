#include "support/toy.hpp"

#include "enplan/lp_builder.hpp"
#include "enplan/report.hpp"
#include "enplan/simplex.hpp"

#include <doctest.h>

#include <cmath>

using namespace enplan;

namespace {

struct Solved {
    BuiltModel model;
    LpProblem problem;
    LpSolution solution;
};

Solved solve_system(const EnergySystem& sys, const std::vector<Overlay>& overlays = {})
{
    BuiltModel model = build(sys, {}, grid_for(sys));
    LpProblem lp = apply_scenario_overlay(model.problem, model, overlays);
    LpSolution sol = solve(lp);
    return {std::move(model), std::move(lp), std::move(sol)};
}

double cap(const Solved& s, const std::string& tech, const std::string& region)
{
    const auto* tc = s.model.catalog.find(tech, region);
    REQUIRE(tc != nullptr);
    return tc->existing + (tc->capacity >= 0 ? s.solution.primal[static_cast<std::size_t>(tc->capacity)] : 0.0);
}

double energy_cap(const Solved& s, const std::string& tech, const std::string& region)
{
    const auto* tc = s.model.catalog.find(tech, region);
    REQUIRE(tc != nullptr);
    return s.solution.primal[static_cast<std::size_t>(tc->energy)];
}

EnergySystem two_nodes(int horizon)
{
    EnergySystem s = toy::single_node(horizon);
    s.regions.push_back(toy::region("B"));
    TransmissionLine l;
    l.id = "AB";
    l.carrier = "elec";
    l.from = "A";
    l.to = "B";
    l.length_km = 100.0;
    l.existing_capacity = 0.5;
    l.expandable = true;
    s.lines.push_back(l);
    return s;
}

} // namespace

TEST_CASE("flat demand met by one dispatchable technology builds exactly the peak")
{
    auto sys = toy::single_node(24);
    auto gen = toy::generator("gas", "elec", 10.0);
    gen.variable_om = 10.0;
    sys.technologies.push_back(gen);
    sys.demands.push_back(toy::flat_demand("load", "elec", "A", 1.0, 24));
    const auto s = solve_system(sys);
    CHECK(s.model.catalog.balance_rows.at("elec").at("A").size() == 24);
    REQUIRE(s.solution.status == SolveStatus::optimal);
    CHECK(cap(s, "gas", "A") == doctest::Approx(1.0));
    // 10 M€/GW/y capacity plus 10 €/MWh over 8760 GWh/y = 87.6 M€.
    CHECK(s.solution.objective == doctest::Approx(10.0 + 87.6));
}

TEST_CASE("flexible daily demand lets a half-day resource double up instead of storing")
{
    auto sys = toy::single_node(24);
    auto gen = toy::generator("solar", "elec", 10.0);
    gen.availability_profile = "half";
    gen.potential = {{"A", 100.0}};
    std::vector<double> half(24, 0.0);
    for (int t = 0; t < 12; ++t) {
        half[static_cast<std::size_t>(t)] = 1.0;
    }
    sys.profiles["half"] = toy::profile("half", half);
    sys.technologies.push_back(gen);
    sys.demands.push_back(toy::flat_demand("load", "elec", "A", 1.0, 24, 24));

    SUBCASE("flexible demand, no storage: 2 GW")
    {
        const auto s = solve_system(sys);
        REQUIRE(s.solution.status == SolveStatus::optimal);
        CHECK(cap(s, "solar", "A") == doctest::Approx(2.0));
        CHECK(s.solution.objective == doctest::Approx(20.0));
    }
    SUBCASE("inflexible demand with lossless storage: 2 GW plus 1 GW / 12 GWh storage")
    {
        sys.demands.back().flexibility_block_hours = 1;
        sys.technologies.push_back(toy::storage("bat", "elec", 1.0, 0.5, 1.0));
        const auto s = solve_system(sys);
        REQUIRE(s.solution.status == SolveStatus::optimal);
        CHECK(cap(s, "solar", "A") == doctest::Approx(2.0));
        CHECK(cap(s, "bat", "A") == doctest::Approx(1.0));
        CHECK(energy_cap(s, "bat", "A") == doctest::Approx(12.0));
        CHECK(s.solution.objective == doctest::Approx(20.0 + 1.0 + 6.0));
    }
    SUBCASE("demand slices respect the peak multiple")
    {
        sys.defaults.demand_peak_multiple = 1.5;
        // 24 GWh within 12 available hours needs 2 GW slices; the cap allows 1.5.
        const auto s = solve_system(sys);
        CHECK(s.solution.status == SolveStatus::infeasible);
    }
}

TEST_CASE("storage recursion is cyclic")
{
    auto sys = toy::single_node(6);
    sys.technologies.push_back(toy::storage("bat", "elec", 1.0, 1.0, 0.81));
    const auto model = build(sys, {}, grid_for(sys));
    const auto a = model.problem.compress();
    const auto* tc = model.catalog.find("bat", "A");
    REQUIRE(tc != nullptr);
    // level[5] enters the row of block 0 with coefficient -1.
    const int row0 = [&] {
        for (int i = 0; i < model.problem.num_rows(); ++i) {
            if (model.problem.row(i).name == "sto[bat,A,0]") {
                return i;
            }
        }
        return -1;
    }();
    REQUIRE(row0 >= 0);
    bool wraps = false;
    const auto j = static_cast<std::size_t>(tc->level.back());
    for (int k = a.start[j]; k < a.start[j + 1]; ++k) {
        if (a.index[static_cast<std::size_t>(k)] == row0) {
            wraps = a.value[static_cast<std::size_t>(k)] == -1.0;
        }
    }
    CHECK(wraps);
}

TEST_CASE("transmission: derated capacity, expansion priced by length")
{
    auto sys = two_nodes(4);
    sys.lines[0].derating = 0.5;
    sys.technologies.push_back(toy::generator("cheap", "elec", 1.0));
    sys.technologies.back().potential = {{"A", 100.0}};
    sys.demands.push_back(toy::flat_demand("load", "elec", "B", 1.0, 4));
    const auto s = solve_system(sys);
    REQUIRE(s.solution.status == SolveStatus::optimal);
    const auto* lc = s.model.catalog.find_line("AB");
    REQUIRE(lc != nullptr);
    // 1 GW over a line with 0.5 × (0.5 + x) capacity: x = 1.5 GW.
    CHECK(s.solution.primal[static_cast<std::size_t>(lc->expansion)] == doctest::Approx(1.5));
    CHECK(lc->expansion_cost == doctest::Approx(100.0 * 2.74e6 / 60.0 / 1e6));
}

TEST_CASE("overlays")
{
    auto sys = two_nodes(4);
    sys.technologies.push_back(toy::generator("cheap", "elec", 1.0));
    sys.technologies.back().potential = {{"A", 100.0}};
    sys.technologies.push_back(toy::generator("local", "elec", 5.0));
    sys.technologies.back().potential = {{"B", 100.0}};
    auto off = toy::generator("offshore", "elec", 3.0);
    off.tech_class = "wind_offshore";
    off.potential = {{"A", 10.0}};
    sys.technologies.push_back(off);
    sys.demands.push_back(toy::flat_demand("load", "elec", "B", 2.0, 4));
    const auto model = build(sys, {}, grid_for(sys));
    const auto* lc = model.catalog.find_line("AB");

    SUBCASE("decentral zeroes every expansion bound")
    {
        const auto lp = apply_scenario_overlay(model.problem, model, {{Overlay::Kind::decentral, 0.0, {}}});
        CHECK(lp.column(lc->expansion).upper == 0.0);
    }
    SUBCASE("central fixes offshore capacity")
    {
        const auto lp = apply_scenario_overlay(model.problem, model, {{Overlay::Kind::central, 5.0, {}}});
        const auto sol = solve(lp);
        REQUIRE(sol.status == SolveStatus::optimal);
        const auto* tc = model.catalog.find("offshore", "A");
        CHECK(sol.primal[static_cast<std::size_t>(tc->capacity)] == doctest::Approx(5.0));
    }
    SUBCASE("grid cap at 100 % of today bounds expansion·length by existing·length")
    {
        const auto lp = apply_scenario_overlay(model.problem, model, {{Overlay::Kind::grid_cap, 1.0, {}}});
        const auto sol = solve(lp);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.primal[static_cast<std::size_t>(lc->expansion)] <= 0.5 + 1e-9);
    }
    SUBCASE("two overlays conflict")
    {
        CHECK_THROWS(apply_scenario_overlay(model.problem, model,
                                            {{Overlay::Kind::decentral, 0.0, {}}, {Overlay::Kind::grid_cap, 1.0, {}}}));
    }
}

TEST_CASE("conversion couples carriers through efficiency")
{
    auto sys = toy::single_node(24);
    sys.carriers.push_back({"h2", CarrierKind::hydrogen, 24});
    sys.technologies.push_back(toy::generator("pv", "elec", 1.0));
    Technology ely;
    ely.id = "ely";
    ely.kind = TechKind::conversion;
    ely.tech_class = "electrolyser";
    ely.input_carrier = "elec";
    ely.output_carrier = "h2";
    ely.capacity_basis = CapacityBasis::input;
    ely.efficiency = 0.5;
    ely.overnight_cost_power = 1.0;
    ely.lifetime = 1.0;
    sys.technologies.push_back(ely);
    sys.demands.push_back(toy::flat_demand("h2load", "h2", "A", 1.0, 24));
    const auto s = solve_system(sys);
    REQUIRE(s.solution.status == SolveStatus::optimal);
    // 1 GW of hydrogen at 50 % needs 2 GW of electricity.
    CHECK(cap(s, "ely", "A") == doctest::Approx(2.0));
    CHECK(cap(s, "pv", "A") == doctest::Approx(2.0));
    const auto a = audit(s.model, s.solution);
    CHECK(a.max_balance_residual <= 1e-6);
}

TEST_CASE("invalid systems are rejected before solve")
{
    auto sys = toy::single_node(24);
    sys.demands.push_back(toy::flat_demand("load", "elec", "A", 1.0, 24));
    CHECK_THROWS_WITH(build(sys, {}, grid_for(sys)), doctest::Contains("not valid"));
}

TEST_CASE("nonzeros grow linearly with the horizon")
{
    auto make = [](int horizon) {
        auto sys = two_nodes(horizon);
        sys.technologies.push_back(toy::generator("g", "elec", 1.0));
        sys.technologies.push_back(toy::storage("bat", "elec", 1.0, 1.0, 0.9));
        sys.demands.push_back(toy::flat_demand("load", "elec", "B", 1.0, horizon));
        return build(sys, {}, grid_for(sys)).problem.nonzeros();
    };
    const auto a = make(24);
    const auto b = make(48);
    const auto c = make(96);
    CHECK(c - b == 2 * (b - a));
}
