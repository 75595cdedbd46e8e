#include "enplan/error.hpp"
#include "enplan/instances.hpp"
#include "enplan/orchestrator.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace enplan;

namespace {

ScenarioConfig named(const std::string& name, const EnergySystem& sys)
{
    return parse_scenario(name, {}, sys);
}

double class_total(const ScenarioResult& r, const std::string& cls)
{
    auto it = r.class_totals.find(cls);
    return it == r.class_totals.end() ? 0.0 : it->second;
}

/// F split into two identical halves joined by an uncongested line.
EnergySystem uniform_regional(int horizon)
{
    EnergySystem sys = toy_regional(horizon);
    for (auto& t : sys.technologies) {
        if (t.id == "pv") {
            t.potential["F1"] = 15.0;
            t.potential["F2"] = 15.0;
        } else if (t.id == "wind") {
            t.potential["F1"] = 10.0;
            t.potential["F2"] = 10.0;
        }
    }
    for (auto& l : sys.lines) {
        if (l.id == "F1-F2") {
            l.existing_capacity = 1000.0;
            l.derating = 1.0;
            l.length_km = 1.0;
        }
    }
    for (auto& d : sys.demands) {
        if (d.region == "F1" || d.region == "F2") {
            d.annual_energy_twh = 30.0;
        }
    }
    return sys;
}

} // namespace

TEST_CASE("single scenario runs record every solve")
{
    const EnergySystem sys = random_system(4, 24);
    const ScenarioRun run = run_scenario(sys, named("integrated", sys));
    REQUIRE(run.optimal());
    REQUIRE(run.solves.size() == 1);
    CHECK(run.solves[0].label == "solve");
    CHECK(run.solves[0].columns == run.problem.num_columns());
    CHECK(run.result.objective_bn_eur == doctest::Approx(run.solution.objective * 1e-3));

    const ScenarioRun dis = run_scenario(sys, named("disintegrated", sys));
    REQUIRE(dis.optimal());
    REQUIRE(dis.solves.size() == 2);
    CHECK(dis.solves[0].label == "phase-a");
    CHECK(dis.solves[1].label == "phase-b");
    CHECK(dis.result.objective_bn_eur >= run.result.objective_bn_eur - 1e-9);
}

TEST_CASE("invalid scenarios are rejected before building")
{
    const EnergySystem sys = random_system(4, 24);
    ScenarioConfig bad;
    bad.overlay = OverlayKind::grid_cap;
    bad.overlay_value = -1.0;
    CHECK_THROWS_AS(run_scenario(sys, bad), Error);
}

TEST_CASE("sweep configuration")
{
    const EnergySystem sys = desk_instance({48, 3, 24, 2040});
    CHECK(parse_sweep_axis("offshore") == SweepAxis::offshore);
    CHECK_THROWS_AS(parse_sweep_axis("solar"), Error);
    CHECK(default_levels(SweepAxis::grid_cap, sys) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(default_levels(SweepAxis::offshore, sys) == std::vector<double>{10.0, 20.0, 30.0, 40.0, 50.0});
    const ScenarioConfig base = named("integrated", sys);
    CHECK_THROWS_AS(sweep(sys, named("decentral", sys), SweepAxis::grid_cap, {0.5}), Error);
    CHECK_THROWS_AS(sweep(sys, base, SweepAxis::grid_cap, {}), Error);
    CHECK_THROWS_AS(sweep(sys, base, SweepAxis::grid_cap, {0.5, 0.25}), Error);
    CHECK_THROWS_AS(sweep(sys, base, SweepAxis::offshore, {1.0}), Error);
}

TEST_CASE("a one-level sweep equals the scenario run")
{
    const EnergySystem sys = random_system(9, 24);
    const SweepResult s = sweep(sys, named("integrated", sys), SweepAxis::grid_cap, {0.5});
    REQUIRE(!s.error);
    REQUIRE(s.results.size() == 1);
    const ScenarioRun run = run_scenario(sys, parse_scenario("integrated", {"grid_cap=0.5"}, sys));
    CHECK(s.results[0].objective_bn_eur == run.result.objective_bn_eur);
    CHECK(s.results[0].expansion_twkm == run.result.expansion_twkm);
    CHECK(s.results[0].axis == "grid_cap");
    CHECK(s.results[0].axis_value == 0.5);
}

TEST_CASE("looser grid caps never raise the cost")
{
    for (std::uint32_t seed : {2u, 5u, 11u}) {
        const EnergySystem sys = random_system(seed, 24);
        const SweepResult s = sweep(sys, named("integrated", sys), SweepAxis::grid_cap, {0.0, 0.5, 1.0, 2.0});
        REQUIRE(!s.error);
        for (std::size_t i = 1; i < s.results.size(); ++i) {
            CHECK(s.results[i].objective_bn_eur <= s.results[i - 1].objective_bn_eur + 1e-9);
            CHECK(s.results[i].expansion_twkm >= 0.0);
        }
    }
}

TEST_CASE("two-stage: foreign investments carried over exactly")
{
    const EnergySystem cont = toy_continental(24);
    const EnergySystem reg = toy_regional(24);
    const TwoStageResult r = run_two_stage(cont, reg, named("integrated", reg));
    REQUIRE(r.optimal());
    CHECK(r.focus_countries == std::vector<std::string>{"F"});
    CHECK(r.exceeded.empty());
    CHECK(!r.fixed.empty());
    const auto& m2 = r.regional.model;
    for (const auto& [name, value] : r.fixed) {
        CHECK(name.find("@F") == std::string::npos);
        const int j = m2.catalog.column_of(name, r.regional.problem);
        REQUIRE(j >= 0);
        CHECK(r.regional.solution.primal[static_cast<std::size_t>(j)] == value);
    }
    CHECK(r.continental.solves.size() == 1);
    CHECK(r.regional.solves.size() == 1);
}

TEST_CASE("two-stage: identical subregions reproduce the national totals")
{
    const EnergySystem cont = toy_continental(24);
    const EnergySystem reg = uniform_regional(24);
    const TwoStageResult r = run_two_stage(cont, reg, named("integrated", reg));
    REQUIRE(r.optimal());
    REQUIRE(!r.reconcile.empty());
    for (const auto& row : r.reconcile) {
        CHECK(std::fabs(row.difference_gw) <= 0.01 * std::max(1.0, std::fabs(row.continental_gw)));
    }
}

TEST_CASE("two-stage: the structural overlay applies to stage 2 only")
{
    const EnergySystem cont = toy_continental(24);
    const EnergySystem reg = toy_regional(24);
    const TwoStageResult dec = run_two_stage(cont, reg, named("decentral", reg));
    const TwoStageResult integ = run_two_stage(cont, reg, named("integrated", reg));
    REQUIRE(dec.optimal());
    REQUIRE(integ.optimal());
    CHECK(dec.continental.solution.objective == integ.continental.solution.objective);
    CHECK(dec.fixed == integ.fixed);
    for (const auto& lc : dec.regional.model.catalog.lines) {
        const TransmissionLine* line = reg.find_line(lc.line);
        if (reg.country_of(line->from) == "F" || reg.country_of(line->to) == "F") {
            CHECK(dec.regional.problem.column(lc.expansion).upper == 0.0);
        }
    }
    CHECK(dec.regional.solution.objective >= integ.regional.solution.objective - 1e-9);
}

TEST_CASE("two-stage: infeasible fixings are located")
{
    const EnergySystem cont = toy_continental(24);
    EnergySystem reg = toy_regional(24);
    for (auto& d : reg.demands) {
        if (d.region == "F1" || d.region == "F2") {
            d.annual_energy_twh *= 4.0;
        }
    }
    const TwoStageResult r = run_two_stage(cont, reg, named("integrated", reg));
    CHECK(r.continental.optimal());
    CHECK(!r.regional.optimal());
    CHECK(!r.exceeded.empty());
}

TEST_CASE("two-stage: foreign deviation band")
{
    const EnergySystem cont = toy_continental(24);
    const EnergySystem reg = toy_regional(24);
    const TwoStageResult strict = run_two_stage(cont, reg, named("integrated", reg));
    const TwoStageResult loose = run_two_stage(cont, reg, parse_scenario("integrated", {"foreign_deviation=0.1"}, reg));
    REQUIRE(loose.optimal());
    CHECK(loose.regional.solution.objective <= strict.regional.solution.objective + 1e-9);
    for (const auto& [name, value] : loose.fixed) {
        const int j = loose.regional.model.catalog.column_of(name, loose.regional.problem);
        const double got = loose.regional.solution.primal[static_cast<std::size_t>(j)];
        CHECK(got >= 0.9 * value - 1e-9);
        CHECK(got <= 1.1 * value + 1e-9);
    }
}

TEST_CASE("two-stage: mismatched systems are rejected")
{
    const EnergySystem cont = toy_continental(24);
    CHECK_THROWS_AS(run_two_stage(cont, cont, named("integrated", cont)), Error);
    CHECK_THROWS_AS(run_two_stage(random_system(1, 24), toy_regional(24), named("integrated", cont)), Error);
}

TEST_CASE("external solver via an MPS round trip")
{
    const EnergySystem sys = random_system(6, 24);
    RunOptions builtin;
    RunOptions external;
    external.solver.command = "python3 tools/mps_scipy_solve.py {mps} {solution}";
    const ScenarioRun a = run_scenario(sys, named("integrated", sys), builtin);
    const ScenarioRun b = run_scenario(sys, named("integrated", sys), external);
    REQUIRE(a.optimal());
    REQUIRE(b.optimal());
    CHECK(b.solution.objective == doctest::Approx(a.solution.objective).epsilon(1e-6));
    CHECK(b.result.objective_bn_eur == doctest::Approx(a.result.objective_bn_eur).epsilon(1e-6));

    RunOptions failing;
    failing.solver.command = "false {mps} {solution}";
    CHECK_THROWS_AS(run_scenario(sys, named("integrated", sys), failing), Error);
}

TEST_CASE("solver selection from the environment")
{
    ::setenv(kSolverEnv, "builtin", 1);
    CHECK(SolverConfig::from_environment().command.empty());
    ::setenv(kSolverEnv, "mysolver {mps} {solution}", 1);
    CHECK(SolverConfig::from_environment().command == "mysolver {mps} {solution}");
    ::unsetenv(kSolverEnv);
    CHECK(SolverConfig::from_environment().command.empty());
}
