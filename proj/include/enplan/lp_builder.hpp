#pragma once

#include "enplan/lp_problem.hpp"
#include "enplan/scenario.hpp"
#include "enplan/system.hpp"
#include "enplan/timegrid.hpp"

#include <map>
#include <string>
#include <vector>

namespace enplan {

enum class VariableKind {
    capacity,
    storage_energy_capacity,
    line_expansion,
    dispatch,
    charge,
    discharge,
    storage_level,
    flow_forward,
    flow_backward,
    demand_slice,
};

std::string_view to_string(VariableKind kind);

/// Owner of one LP column.
struct VariableEntry {
    VariableKind kind = VariableKind::capacity;
    std::string owner;  ///< technology, line or demand id
    std::string region; ///< empty for line variables
    int block = -1;     ///< block index in the owner's operating resolution; -1 for investments
    int hours = 0;      ///< block length; 0 for investments
};

/// Investment columns of one technology in one node.
struct TechnologyColumns {
    std::string tech;
    std::string region;
    TechKind kind = TechKind::generation;
    std::string tech_class;
    int capacity = -1; ///< -1 when no new capacity may be built
    int energy = -1;   ///< storage only
    double existing = 0.0;
    /// Operating columns: dispatch, or discharge for storage.
    std::vector<int> dispatch;
    std::vector<int> charge;
    std::vector<int> level;
    int hours = 1; ///< operating block length
};

struct LineColumns {
    std::string line;
    bool electric = false;
    bool intra_country = false;
    bool stays_in_focus = false; ///< both ends inside one container country
    double length_km = 0.0;
    double existing = 0.0;
    double derating = 1.0;
    double expansion_cost = 0.0; ///< M€/GW/y
    int expansion = -1;          ///< -1 when not expandable
    std::vector<int> forward;
    std::vector<int> backward;
    std::vector<int> limit_forward; ///< rows; empty when flows are bounded directly
    std::vector<int> limit_backward;
    int hours = 1;
};

/// Typed index of LP columns; `entries[j]` owns column j.
struct VariableCatalog {
    std::vector<VariableEntry> entries;
    std::vector<TechnologyColumns> technologies;
    std::vector<LineColumns> lines;
    /// Balance row of (carrier, node, block).
    std::map<std::string, std::map<std::string, std::vector<int>>> balance_rows;
    /// Fixed (inflexible) demand energy per (carrier, node, block), GWh.
    std::map<std::string, std::map<std::string, std::vector<double>>> fixed_demand;
    /// Slice columns per demand id, one per carrier block.
    std::map<std::string, std::vector<int>> demand_slices;

    int column_of(const std::string& name, const LpProblem& problem) const;
    const TechnologyColumns* find(const std::string& tech, const std::string& region) const;
    const LineColumns* find_line(const std::string& line) const;
};

/// A fully prepared model: the system as modelled (wake blocks split, demand
/// variant applied), its time grid, the LP and the catalog.
struct BuiltModel {
    EnergySystem system;
    TimeGrid grid;
    LpProblem problem;
    VariableCatalog catalog;
    /// Approximate currency weight of one unit of the operating horizon: 8760 / horizon.
    double year_weight = 1.0;
};

/// One constraint overlay applied after the base build.
struct Overlay {
    enum class Kind {
        integrated,
        disintegrated_phase_a,
        disintegrated_phase_b,
        central,
        decentral,
        grid_cap,
        offshore_fix,
    };
    Kind kind = Kind::integrated;
    double value = 0.0;
    /// Phase B: investment column name → value to fix.
    std::map<std::string, double> fixed;
};

/// Time grid implied by the system's carrier resolutions.
TimeGrid grid_for(const EnergySystem& system);

/// System as modelled under `scenario`: wake blocks split, EFF demand scaled.
EnergySystem prepare_system(const EnergySystem& system, const ScenarioConfig& scenario);

/// Base LP of `scenario` without any overlay (the integrated formulation).
/// Objective in M€/y; capacities GW, storage energy GWh, balances GWh per block.
/// Throws when the system fails validation or the grid does not match it.
BuiltModel build(const EnergySystem& system, const ScenarioConfig& scenario, const TimeGrid& grid);

/// Returns a copy of `problem` with the overlays applied; more than one
/// non-integrated overlay is rejected.
LpProblem apply_scenario_overlay(const LpProblem& problem, const BuiltModel& model,
                                 const std::vector<Overlay>& overlays);

/// How fixed investment values are imposed on a re-solve.
enum class FixMode {
    equal,       ///< lower = upper = value
    at_least,    ///< lower = value; used to locate infeasible fixings
    deviation,   ///< value × (1 ± band)
};

/// Fixes the named columns of `problem` in place.
void fix_columns(LpProblem& problem, const std::map<std::string, double>& values, FixMode mode,
                 double band = 0.0);

/// Investment column names and values (capacity, storage energy, line expansion) of a solution.
std::map<std::string, double> investment_values(const BuiltModel& model, const LpSolution& solution,
                                                bool include_lines);

} // namespace enplan
