#pragma once

#include "enplan/lp_builder.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enplan {

/// Reporting class of a technology class: rooftop and open-space PV become "pv".
std::string capacity_class(const std::string& tech_class);

struct CapacityRow {
    std::string region;
    std::string tech;
    std::string tech_class; ///< reporting class
    double existing_gw = 0.0;
    double new_gw = 0.0;
    double total_gw = 0.0;
    double energy_gwh = 0.0; ///< storage only
};

struct ExpansionRow {
    std::string line;
    std::string carrier;
    std::string from;
    std::string to;
    double length_km = 0.0;
    double existing_gw = 0.0;
    double expansion_gw = 0.0;
    double twkm = 0.0;
};

/// Annualised cost split, bn €/y.
struct CostBreakdown {
    double battery = 0.0;
    double generation = 0.0;
    double operational = 0.0;
    double transmission = 0.0;

    double total() const { return battery + generation + operational + transmission; }
};

struct TechCostRow {
    std::string tech;
    std::string tech_class;
    double investment_meur = 0.0;
    double operational_meur = 0.0;
};

struct ExchangeRow {
    std::string region;
    std::string carrier;
    double net_import_twh = 0.0; ///< per year
};

struct DispatchRow {
    std::string variable; ///< catalog kind
    std::string owner;
    std::string region;
    int block = 0;
    int start_hour = 0;
    int hours = 0;
    double value = 0.0; ///< GW, GWh for levels and slices
};

struct ScenarioResult {
    std::string scenario;
    std::string axis;                ///< empty outside sweeps
    double axis_value = 0.0;
    SolveStatus status = SolveStatus::optimal;
    double objective_bn_eur = 0.0;   ///< LP objective
    std::vector<CapacityRow> capacities;          ///< sorted by (region, tech)
    std::map<std::string, double> class_totals;   ///< reporting class → total GW
    std::vector<ExpansionRow> expansion;          ///< sorted by line id
    double expansion_twkm = 0.0;                  ///< electricity lines
    CostBreakdown costs;
    std::vector<TechCostRow> tech_costs;          ///< sorted by tech id
    std::vector<ExchangeRow> exchange;            ///< sorted by (region, carrier)
    std::vector<DispatchRow> dispatch;            ///< empty unless requested
    std::vector<std::string> assumptions;
};

struct SummaryOptions {
    bool dispatch = false;
    std::optional<int> week; ///< restricts dispatch to hours [168·week, 168·(week+1))
};

/// Aggregates an optimal solution of `problem`, which must be `model.problem`
/// or an overlay of it; rejects any other status.
ScenarioResult summarize(const BuiltModel& model, const LpProblem& problem, const LpSolution& solution,
                         const std::string& scenario, const SummaryOptions& options = {});

/// Physical audit of a solution, recomputed from the system data and catalog.
struct BalanceAudit {
    double max_balance_residual = 0.0;  ///< GWh per block
    double max_storage_closure = 0.0;   ///< GWh per block, including the wrap-around
    double net_exchange_sum_twh = 0.0;  ///< Σ over nodes and carriers
};

BalanceAudit audit(const BuiltModel& model, const LpSolution& solution);

enum class OutputFormat { csv, jsonl };

OutputFormat parse_output_format(std::string_view text);

/// Writes one file per table into `dir`; byte-identical for identical results.
void emit(const ScenarioResult& result, OutputFormat format, const std::filesystem::path& dir);

/// Writes the per-level directories plus substitution_curve.{csv,jsonl}.
void emit_sweep(const std::vector<ScenarioResult>& results, OutputFormat format,
                const std::filesystem::path& dir);

} // namespace enplan
