#pragma once

#include "enplan/lp_builder.hpp"
#include "enplan/report.hpp"
#include "enplan/scenario.hpp"
#include "enplan/simplex.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enplan {

/// Name of the environment variable selecting the LP solver.
inline constexpr const char* kSolverEnv = "ENPLAN_SOLVER";

/// Built-in simplex, or an external command run on an MPS export.
///
/// The command template may use {mps}, {names} and {solution}; the command must
/// write the solution CSV (name,value with optional __status__) to {solution}.
struct SolverConfig {
    std::string command; ///< empty selects the built-in solver
    SolveOptions options;

    /// "builtin" or unset selects the built-in solver; anything else is a command template.
    static SolverConfig from_environment();
};

LpSolution run_solver(const LpProblem& problem, const SolverConfig& solver);

/// The single-solve overlay of a scenario; disintegrated maps to the plain
/// integrated problem, its phases are applied by run_scenario.
Overlay overlay_for(const ScenarioConfig& scenario);

struct RunOptions {
    SolverConfig solver;
    SummaryOptions summary;
};

/// One LP solve performed while running a scenario.
struct SolveRecord {
    std::string label; ///< e.g. "phase-a", "stage-2"
    SolveStatus status = SolveStatus::optimal;
    double objective = 0.0;
    long iterations = 0;
    int rows = 0;
    int columns = 0;
    std::size_t nonzeros = 0;
};

struct ScenarioRun {
    ScenarioResult result;
    std::vector<SolveRecord> solves;
    /// Model and solution of the final solve; the solution is empty when a solve failed.
    BuiltModel model;
    LpProblem problem;
    LpSolution solution;

    bool optimal() const;
};

/// Investment fixings carried into a solve.
struct Fixings {
    std::map<std::string, double> values;
    FixMode mode = FixMode::equal;
    double band = 0.0;
};

/// Builds and solves one scenario; the disintegrated overlay solves phase A
/// (copperplate inside countries, no grid cost) and then phase B (investments
/// fixed, grid expansion re-optimised).
ScenarioRun run_scenario(const EnergySystem& system, const ScenarioConfig& scenario,
                         const RunOptions& options = {}, const Fixings& fixings = {});

enum class SweepAxis { grid_cap, offshore };

SweepAxis parse_sweep_axis(std::string_view text);
std::string_view to_string(SweepAxis axis);

/// Default levels: grid cap 0..100 % of today's grid, offshore 20..100 % of the
/// system's central offshore target in five steps.
std::vector<double> default_levels(SweepAxis axis, const EnergySystem& system);

struct SweepResult {
    std::vector<ScenarioResult> results; ///< in level order, up to the first failure
    std::optional<std::string> error;     ///< first failing level
};

/// Runs one scenario per level concurrently; `base` must carry the integrated overlay.
SweepResult sweep(const EnergySystem& system, const ScenarioConfig& base, SweepAxis axis,
                  const std::vector<double>& levels, const RunOptions& options = {});

struct ReconcileRow {
    std::string country;
    std::string tech_class;
    double continental_gw = 0.0;
    double regional_gw = 0.0;
    double difference_gw = 0.0;
};

struct TwoStageResult {
    ScenarioRun continental;
    ScenarioRun regional;
    std::map<std::string, double> fixed;  ///< non-focus investment column → stage-1 value
    std::vector<std::string> exceeded;    ///< fixings that had to move for stage 2 to become feasible
    std::vector<ReconcileRow> reconcile;  ///< focus national totals against regional sums
    std::vector<std::string> focus_countries;

    bool optimal() const { return continental.optimal() && regional.optimal(); }
};

/// Stage 1 solves the continental system greenfield (integrated overlay, the
/// scenario's demand variant). Stage 2 fixes every non-focus investment to its
/// stage-1 value and solves the regional system under the scenario.
TwoStageResult run_two_stage(const EnergySystem& continental, const EnergySystem& regional,
                             const ScenarioConfig& scenario, const RunOptions& options = {});

} // namespace enplan
