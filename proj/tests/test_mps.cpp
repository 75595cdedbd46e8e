#include "enplan/error.hpp"
#include "enplan/instances.hpp"
#include "enplan/lp_builder.hpp"
#include "enplan/mps.hpp"
#include "enplan/scenario.hpp"
#include "enplan/simplex.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support/vertex_oracle.hpp"

using namespace enplan;

namespace {

LpProblem small_lp()
{
    LpProblem p;
    const int x = p.add_column("x", 0.0, kUnbounded, 1.0);
    const int y = p.add_column("a_rather_long_column_name", -kUnbounded, 4.0, -2.0);
    const int z = p.add_column("z", -1.0, -1.0, 0.5);
    const int r0 = p.add_row("bal", RowSense::greater_equal, 1.0);
    const int r1 = p.add_row("a_rather_long_row_name", RowSense::less_equal, 3.0);
    const int r2 = p.add_row("eq", RowSense::equal, 0.25);
    p.add_coefficient(r0, x, 1.0);
    p.add_coefficient(r0, y, 1.0);
    p.add_coefficient(r1, y, 0.3125);
    p.add_coefficient(r1, x, -2.0);
    p.add_coefficient(r2, x, 1.0);
    p.add_coefficient(r2, z, 0.125);
    p.objective_offset = 7.0;
    return p;
}

bool close(double a, double b, double rel)
{
    return a == b || std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

/// `rel` 0 demands bit-identical numbers.
void check_same(const LpProblem& a, const LpProblem& b, double rel = 0.0)
{
    REQUIRE(a.num_columns() == b.num_columns());
    REQUIRE(a.num_rows() == b.num_rows());
    for (int j = 0; j < a.num_columns(); ++j) {
        CHECK(a.column(j).name == b.column(j).name);
        CHECK(close(a.column(j).lower, b.column(j).lower, rel));
        CHECK(close(a.column(j).upper, b.column(j).upper, rel));
        CHECK(close(a.column(j).cost, b.column(j).cost, rel));
    }
    for (int i = 0; i < a.num_rows(); ++i) {
        CHECK(a.row(i).name == b.row(i).name);
        CHECK(a.row(i).sense == b.row(i).sense);
        CHECK(close(a.row(i).rhs, b.row(i).rhs, rel));
    }
    const auto ca = a.compress();
    const auto cb = b.compress();
    CHECK(ca.start == cb.start);
    CHECK(ca.index == cb.index);
    REQUIRE(ca.value.size() == cb.value.size());
    for (std::size_t k = 0; k < ca.value.size(); ++k) {
        CHECK(close(ca.value[k], cb.value[k], rel));
    }
    CHECK(close(a.objective_offset, b.objective_offset, rel));
}

LpProblem round_trip(const LpProblem& p)
{
    const auto exported = export_mps(p);
    std::istringstream names(exported.names.to_csv(p));
    const auto table = MpsNameTable::parse_csv(names);
    std::istringstream text(exported.text);
    return read_mps(text, &table);
}

} // namespace

TEST_CASE("empty problem exports a minimal file")
{
    LpProblem p;
    const auto e = export_mps(p);
    CHECK(e.text.find("NAME") == 0);
    CHECK(e.text.find("ROWS\n N  COST") != std::string::npos);
    CHECK(e.text.find("ENDATA") != std::string::npos);
    std::istringstream in(e.text);
    const LpProblem back = read_mps(in);
    CHECK(back.num_columns() == 0);
    CHECK(back.num_rows() == 0);
}

TEST_CASE("round trip restores names, bounds and coefficients")
{
    const LpProblem p = small_lp();
    check_same(p, round_trip(p));
    const auto a = solve(p);
    const auto b = solve(round_trip(p));
    REQUIRE(a.status == SolveStatus::optimal);
    CHECK(a.objective == b.objective);
}

TEST_CASE("fixed-format fields")
{
    const auto e = export_mps(small_lp());
    std::istringstream in(e.text);
    std::string line;
    bool in_columns = false;
    while (std::getline(in, line)) {
        if (line == "COLUMNS") {
            in_columns = true;
            continue;
        }
        if (line == "RHS") {
            break;
        }
        if (in_columns) {
            // Fields start at columns 5, 15, 25 and 40.
            CHECK(line.substr(0, 4) == "    ");
            CHECK(line.size() <= 61);
            CHECK(line[12] == ' ');
        }
    }
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::pow(10.0, u(rng)) * (i % 2 ? 1.0 : -1.0);
        const std::string s = format_mps_number(v);
        CHECK(s.size() <= 12);
        CHECK(close(std::stod(s), v, 5e-5));
    }
    // Up to ten significant digits survive exactly at moderate magnitudes.
    for (double v : {0.1, 123.456, -2.5e-7, 8760.0, 2740000.0, 0.0512204, 1e30, -1e30}) {
        CHECK(std::stod(format_mps_number(v)) == v);
    }
    CHECK(format_mps_number(0.1) == "0.1");
    CHECK(format_mps_number(1.0 / 3.0).size() <= 12);
}

TEST_CASE("name mangling is deterministic and reversible")
{
    LpProblem p;
    p.add_column("C0000000", 0, 1, 0); // occupies the first mangled name
    p.add_column("cap[wind_offshore,N]", 0, 1, 0);
    p.add_column("short", 0, 1, 0);
    p.add_column("has space", 0, 1, 0);
    p.add_row("COST", RowSense::equal, 0.0);
    const auto a = MpsNameMap::build(p);
    const auto b = MpsNameMap::build(p);
    CHECK(a.column_names == b.column_names);
    CHECK(a.column_names[0] == "C0000000");
    CHECK(a.column_names[1] == "C0000001");
    CHECK(a.column_names[2] == "short");
    CHECK(a.column_names[3] == "C0000002");
    CHECK(a.row_names[0] != "COST");
    const auto table = a.table(p);
    CHECK(table.columns.at("C0000001") == "cap[wind_offshore,N]");
    check_same(p, round_trip(p));
}

TEST_CASE("built models survive the round trip")
{
    const EnergySystem sys = random_system(11, 12);
    const auto cfg = parse_scenario("integrated", {}, sys);
    const BuiltModel m = build(sys, cfg, grid_for(sys));
    const LpProblem back = round_trip(m.problem);
    check_same(m.problem, back, 1e-10);
    CHECK(solve(m.problem).objective == doctest::Approx(solve(back).objective).epsilon(1e-9));
}

TEST_CASE("solution import")
{
    const LpProblem p = small_lp();
    const auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::optimal);
    std::ostringstream out;
    write_solution_csv(out, p, sol);
    std::istringstream in(out.str());
    const auto back = import_solution(in, p);
    CHECK(back.status == SolveStatus::optimal);
    CHECK(back.primal == sol.primal);
    CHECK(back.objective == doctest::Approx(sol.objective).epsilon(1e-12));

    const auto names = MpsNameMap::build(p);
    std::istringstream mangled("name,value\n__status__,optimal\nx,0.25\nC0000000,1\n");
    const auto viam = import_solution(mangled, p, &names);
    CHECK(viam.primal[1] == 1.0);
    CHECK(viam.primal[2] == 0.0); // absent columns read as zero

    std::istringstream unknown("name,value\nx,1\nnope,2\n");
    CHECK_THROWS_WITH_AS(import_solution(unknown, p), doctest::Contains("line 3"), Error);
    std::istringstream twice("name,value\nx,1\nx,2\n");
    CHECK_THROWS_AS(import_solution(twice, p), Error);
    std::istringstream infeasible("name,value\n__status__,infeasible\n");
    CHECK(import_solution(infeasible, p).status == SolveStatus::infeasible);
}

TEST_CASE("reader rejects unsupported sections")
{
    std::istringstream ranges("NAME x\nROWS\n N COST\n L r\nCOLUMNS\n x r 1\nRHS\nRANGES\n R r 1\nENDATA\n");
    CHECK_THROWS_AS(read_mps(ranges), Error);
    std::istringstream truncated("NAME x\nROWS\n N COST\n");
    CHECK_THROWS_AS(read_mps(truncated), Error);
}
