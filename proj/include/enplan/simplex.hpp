#pragma once

#include "enplan/lp_problem.hpp"

namespace enplan {

struct SolveOptions {
    double pivot_tolerance = 1e-7;
    double primal_tolerance = 1e-9; ///< bound violation accepted on the scaled problem
    double dual_tolerance = 1e-9;   ///< reduced-cost threshold on the scaled problem
    double residual_tolerance = 1e-6;
    long max_iterations = 1'000'000;
    bool scaling = true;
    int refactor_interval = 100;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int degenerate_limit = 50;
};

/// Bounded revised primal simplex.
///
/// Rows become equalities A·x − r = 0 over logical variables r carrying the row
/// bounds, so the all-logical basis is always available as a start. Phase one
/// minimises the sum of basic bound violations; phase two prices with Dantzig's
/// rule, lowest index on ties, and falls back to Bland's rule after a run of
/// degenerate pivots. The basis is factorised with a sparse LU and updated in
/// product form between refactorisations.
LpSolution solve(const LpProblem& problem, const SolveOptions& options = {});

} // namespace enplan
