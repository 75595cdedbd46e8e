#include "support/vertex_oracle.hpp"

#include "enplan/simplex.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace enplan;

namespace {

double rel_gap(double a, double b)
{
    return std::fabs(a - b) / std::max(1.0, std::fabs(b));
}

void require_certified(const LpProblem& lp, const LpSolution& sol)
{
    REQUIRE(sol.status == SolveStatus::optimal);
    const auto chk = check_solution(lp, sol);
    CHECK(chk.primal_residual <= 1e-6);
    CHECK(chk.dual_residual <= 1e-6);
    CHECK(chk.complementarity <= 1e-6);
    CHECK(chk.dual_objective <= chk.primal_objective + 1e-6 * (1 + std::fabs(chk.primal_objective)));
}

} // namespace

TEST_CASE("min x subject to x >= 3")
{
    LpProblem lp;
    const int x = lp.add_column("x", -HUGE_VAL, HUGE_VAL, 1.0);
    const int r = lp.add_row("lower", RowSense::greater_equal, 3.0);
    lp.add_coefficient(r, x, 1.0);
    const auto sol = solve(lp);
    require_certified(lp, sol);
    CHECK(sol.objective == doctest::Approx(3.0));
    CHECK(sol.primal[0] == doctest::Approx(3.0));
    CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("empty problem is optimal at the bounds")
{
    LpProblem lp;
    lp.add_column("a", 1.0, 4.0, 2.0);
    lp.add_column("b", -2.0, 5.0, -1.0);
    lp.add_column("c", 0.0, HUGE_VAL, 0.0);
    lp.objective_offset = 10.0;
    const auto sol = solve(lp);
    require_certified(lp, sol);
    CHECK(sol.objective == doctest::Approx(10.0 + 2.0 - 5.0));
}

TEST_CASE("infeasible and unbounded statuses")
{
    LpProblem inf;
    const int x = inf.add_column("x", 0.0, 1.0, 1.0);
    const int r = inf.add_row("r", RowSense::greater_equal, 2.0);
    inf.add_coefficient(r, x, 1.0);
    CHECK(solve(inf).status == SolveStatus::infeasible);

    LpProblem unb;
    const int y = unb.add_column("y", 0.0, HUGE_VAL, -1.0);
    const int z = unb.add_column("z", 0.0, HUGE_VAL, 0.0);
    const int s = unb.add_row("s", RowSense::less_equal, 1.0);
    unb.add_coefficient(s, y, 1.0);
    unb.add_coefficient(s, z, -1.0);
    CHECK(solve(unb).status == SolveStatus::unbounded);
}

TEST_CASE("degenerate tie resolves deterministically")
{
    // Both columns price equally; the vertex (1, 0) is degenerate on three rows.
    LpProblem lp;
    const int a = lp.add_column("a", 0.0, HUGE_VAL, -1.0);
    const int b = lp.add_column("b", 0.0, HUGE_VAL, -1.0);
    const int r0 = lp.add_row("r0", RowSense::less_equal, 1.0);
    const int r1 = lp.add_row("r1", RowSense::less_equal, 1.0);
    const int r2 = lp.add_row("r2", RowSense::less_equal, 1.0);
    lp.add_coefficient(r0, a, 1.0);
    lp.add_coefficient(r0, b, 1.0);
    lp.add_coefficient(r1, a, 1.0);
    lp.add_coefficient(r2, a, 1.0);
    lp.add_coefficient(r2, b, 2.0);
    SolveOptions opt;
    opt.degenerate_limit = 0;
    const auto first = solve(lp, opt);
    const auto second = solve(lp, opt);
    require_certified(lp, first);
    CHECK(first.objective == doctest::Approx(-1.0));
    CHECK(first.primal == second.primal);
    CHECK(first.iterations == second.iterations);
}

TEST_CASE("random boxed LPs agree with vertex enumeration")
{
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> size(2, 6);
    int optimal = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const auto lp = oracle::random_boxed_lp(rng, size(rng), size(rng));
        const auto expected = oracle::enumerate_vertices(lp);
        for (bool scaling : {true, false}) {
            SolveOptions opt;
            opt.scaling = scaling;
            const auto sol = solve(lp, opt);
            if (!expected) {
                CHECK(sol.status == SolveStatus::infeasible);
                continue;
            }
            require_certified(lp, sol);
            CHECK(rel_gap(sol.objective, *expected) <= 1e-6);
            optimal += scaling ? 1 : 0;
        }
    }
    CHECK(optimal >= 100);
}

TEST_CASE("objective scaling leaves the argmin unchanged")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        auto lp = oracle::random_boxed_lp(rng, 5, 6);
        const auto base = solve(lp);
        if (base.status != SolveStatus::optimal) {
            continue;
        }
        for (int j = 0; j < lp.num_columns(); ++j) {
            lp.column(j).cost *= 8.0;
        }
        const auto scaled = solve(lp);
        REQUIRE(scaled.status == SolveStatus::optimal);
        CHECK(scaled.objective == doctest::Approx(8.0 * base.objective).epsilon(1e-9));
    }
}

TEST_CASE("solve is deterministic")
{
    std::mt19937_64 rng(99);
    const auto lp = oracle::random_boxed_lp(rng, 15, 25, 0.4);
    const auto a = solve(lp);
    const auto b = solve(lp);
    CHECK(a.status == b.status);
    CHECK(a.primal == b.primal);
    CHECK(a.duals == b.duals);
}

TEST_CASE("iteration limit is reported as a status")
{
    std::mt19937_64 rng(3);
    const auto lp = oracle::random_boxed_lp(rng, 15, 25, 0.6);
    SolveOptions opt;
    opt.max_iterations = 1;
    const auto sol = solve(lp, opt);
    CHECK((sol.status == SolveStatus::iteration_limit || sol.iterations <= 1));
}
