#include "enplan/report.hpp"

#include "enplan/csv.hpp"
#include "enplan/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace enplan {

namespace fs = std::filesystem;

std::string capacity_class(const std::string& tech_class)
{
    if (tech_class == "pv" || tech_class.rfind("pv_", 0) == 0) {
        return "pv";
    }
    return tech_class;
}

namespace {

/// Solver noise below this magnitude is reported as zero.
double tidy(double v)
{
    return std::fabs(v) < 1e-9 ? 0.0 : v;
}

double value_of(const LpSolution& s, int j)
{
    return j < 0 ? 0.0 : s.primal.at(static_cast<std::size_t>(j));
}

/// Net energy into each (carrier, node) over the horizon, GWh, from the line perspective.
std::map<std::pair<std::string, std::string>, double> line_exchange(const BuiltModel& model,
                                                                    const LpSolution& s)
{
    std::map<std::pair<std::string, std::string>, double> out;
    for (const auto& lc : model.catalog.lines) {
        const TransmissionLine* line = model.system.find_line(lc.line);
        const double received = 1.0 - line->losses;
        double fwd = 0.0;
        double bwd = 0.0;
        for (int j : lc.forward) {
            fwd += value_of(s, j) * lc.hours;
        }
        for (int j : lc.backward) {
            bwd += value_of(s, j) * lc.hours;
        }
        out[{line->carrier, line->from}] += received * bwd - fwd;
        out[{line->carrier, line->to}] += received * fwd - bwd;
    }
    return out;
}

std::vector<std::string> standard_assumptions(const EnergySystem& sys)
{
    std::vector<std::string> out = sys.assumption_flags;
    bool lossless = true;
    bool methane_unbounded = false;
    bool h2_fraction = false;
    bool intra_derated = false;
    for (const auto& l : sys.lines) {
        lossless = lossless && l.losses == 0.0;
        const Carrier* c = sys.find_carrier(l.carrier);
        if (c->kind == CarrierKind::methane && std::isinf(l.existing_capacity)) {
            methane_unbounded = true;
        }
        if (c->kind == CarrierKind::hydrogen && l.expandable && !l.expansion_cost) {
            h2_fraction = true;
        }
        if (l.expandable && l.derating < 1.0) {
            intra_derated = true;
        }
    }
    if (lossless) {
        out.push_back("transmission losses are 0");
    }
    out.push_back("storage self-discharge is 0; storage levels are cyclic over the horizon");
    for (const auto& t : sys.technologies) {
        if (t.id.size() > 5 && t.id.compare(t.id.size() - 5, 5, "_wake") == 0) {
            out.push_back("wake effect: " + t.id + " availability scaled to " +
                          csv::format_significant(t.availability_scale));
        }
    }
    if (h2_fraction) {
        out.push_back("hydrogen pipeline upgrade cost is " +
                      csv::format_significant(sys.costing.h2_pipeline_cost_fraction) +
                      " of an electricity line of equal length");
    }
    if (methane_unbounded) {
        out.push_back("methane pipelines between adjacent regions are unbounded");
    }
    if (intra_derated) {
        out.push_back("line derating applies to existing and expansion capacity");
    }
    out.push_back("demand slices within a flexibility block are bounded by " +
                  csv::format_significant(sys.defaults.demand_peak_multiple) + " x the block mean");
    return out;
}

} // namespace

ScenarioResult summarize(const BuiltModel& model, const LpProblem& problem, const LpSolution& solution,
                         const std::string& scenario, const SummaryOptions& options)
{
    if (solution.status != SolveStatus::optimal) {
        throw Error("cannot summarize scenario '" + scenario + "': solver status " +
                    std::string(to_string(solution.status)));
    }
    if (problem.num_columns() != model.problem.num_columns() ||
        solution.primal.size() != static_cast<std::size_t>(problem.num_columns())) {
        throw Error("cannot summarize scenario '" + scenario + "': solution does not match the model");
    }
    const auto& sys = model.system;
    const auto& cat = model.catalog;
    ScenarioResult r;
    r.scenario = scenario;
    r.status = solution.status;
    r.objective_bn_eur = solution.objective * problem.objective_unit / 1e9;

    for (const auto& tc : cat.technologies) {
        CapacityRow row;
        row.region = tc.region;
        row.tech = tc.tech;
        row.tech_class = capacity_class(tc.tech_class);
        row.existing_gw = tc.existing;
        row.new_gw = tidy(value_of(solution, tc.capacity));
        row.total_gw = row.existing_gw + row.new_gw;
        row.energy_gwh = tidy(value_of(solution, tc.energy));
        r.class_totals[row.tech_class] += row.total_gw;
        r.capacities.push_back(row);
    }
    std::sort(r.capacities.begin(), r.capacities.end(), [](const CapacityRow& a, const CapacityRow& b) {
        return std::tie(a.region, a.tech) < std::tie(b.region, b.tech);
    });

    for (const auto& lc : cat.lines) {
        const TransmissionLine* line = sys.find_line(lc.line);
        ExpansionRow row;
        row.line = lc.line;
        row.carrier = line->carrier;
        row.from = line->from;
        row.to = line->to;
        row.length_km = line->length_km;
        row.existing_gw = line->existing_capacity;
        row.expansion_gw = tidy(value_of(solution, lc.expansion));
        row.twkm = row.expansion_gw * row.length_km / 1e3;
        if (lc.electric) {
            r.expansion_twkm += row.twkm;
        }
        r.expansion.push_back(row);
    }
    std::sort(r.expansion.begin(), r.expansion.end(),
              [](const ExpansionRow& a, const ExpansionRow& b) { return a.line < b.line; });

    // Costs from the solved problem's objective coefficients; M€ → bn €.
    std::map<std::string, TechCostRow> per_tech;
    const double to_bn = problem.objective_unit / 1e9;
    for (int j = 0; j < problem.num_columns(); ++j) {
        const double amount = problem.column(j).cost * solution.primal[static_cast<std::size_t>(j)] * to_bn;
        if (amount == 0.0) {
            continue;
        }
        const auto& e = cat.entries[static_cast<std::size_t>(j)];
        const Technology* tech = sys.find_technology(e.owner);
        switch (e.kind) {
        case VariableKind::capacity:
            (tech->kind == TechKind::storage ? r.costs.battery : r.costs.generation) += amount;
            per_tech[e.owner].investment_meur += amount * 1e3;
            break;
        case VariableKind::storage_energy_capacity:
            r.costs.battery += amount;
            per_tech[e.owner].investment_meur += amount * 1e3;
            break;
        case VariableKind::line_expansion:
            r.costs.transmission += amount;
            break;
        default:
            r.costs.operational += amount;
            if (tech != nullptr) {
                per_tech[e.owner].operational_meur += amount * 1e3;
            }
            break;
        }
    }
    for (const auto& tech : sys.technologies) {
        TechCostRow row = per_tech[tech.id];
        row.tech = tech.id;
        row.tech_class = capacity_class(tech.tech_class);
        r.tech_costs.push_back(row);
    }
    std::sort(r.tech_costs.begin(), r.tech_costs.end(),
              [](const TechCostRow& a, const TechCostRow& b) { return a.tech < b.tech; });

    const auto flows = line_exchange(model, solution);
    for (const auto& node : sys.nodes()) {
        for (const auto& c : sys.carriers) {
            auto it = flows.find({c.id, node});
            const double gwh = it == flows.end() ? 0.0 : it->second;
            r.exchange.push_back({node, c.id, tidy(gwh * model.year_weight / 1e3)});
        }
    }
    std::sort(r.exchange.begin(), r.exchange.end(), [](const ExchangeRow& a, const ExchangeRow& b) {
        return std::tie(a.region, a.carrier) < std::tie(b.region, b.carrier);
    });

    if (options.dispatch) {
        const int first_hour = options.week ? 168 * *options.week : 0;
        const int last_hour = options.week ? first_hour + 168 : sys.horizon_hours;
        if (options.week && (*options.week < 0 || first_hour >= sys.horizon_hours)) {
            throw Error("week " + std::to_string(*options.week) + " lies outside the horizon");
        }
        for (std::size_t j = 0; j < cat.entries.size(); ++j) {
            const auto& e = cat.entries[j];
            if (e.block < 0) {
                continue;
            }
            const int start = e.block * e.hours;
            if (start + e.hours <= first_hour || start >= last_hour) {
                continue;
            }
            r.dispatch.push_back({std::string(to_string(e.kind)), e.owner, e.region, e.block, start, e.hours,
                                  tidy(solution.primal[j])});
        }
        std::stable_sort(r.dispatch.begin(), r.dispatch.end(), [](const DispatchRow& a, const DispatchRow& b) {
            return std::tie(a.region, a.owner, a.variable, a.block) <
                   std::tie(b.region, b.owner, b.variable, b.block);
        });
    }
    r.assumptions = standard_assumptions(sys);
    return r;
}

BalanceAudit audit(const BuiltModel& model, const LpSolution& s)
{
    const auto& sys = model.system;
    const auto& grid = model.grid;
    const auto& cat = model.catalog;
    // net[carrier][node][block]: supply − use − demand, GWh.
    std::map<std::string, std::map<std::string, std::vector<double>>> net;
    for (const auto& [carrier, by_node] : cat.fixed_demand) {
        for (const auto& [node, demand] : by_node) {
            auto& v = net[carrier][node];
            v.resize(demand.size());
            for (std::size_t b = 0; b < demand.size(); ++b) {
                v[b] = -demand[b];
            }
        }
    }
    auto add = [&](const std::string& carrier, const std::string& node, int step, double gwh) {
        net.at(carrier).at(node).at(static_cast<std::size_t>(grid.block_of(carrier, step))) += gwh;
    };

    BalanceAudit out;
    for (const auto& tc : cat.technologies) {
        const Technology* tech = sys.find_technology(tc.tech);
        for (std::size_t b = 0; b < tc.dispatch.size(); ++b) {
            const int step = static_cast<int>(b) * tc.hours;
            const double x = value_of(s, tc.dispatch[b]) * tc.hours;
            switch (tech->kind) {
            case TechKind::generation:
                add(tech->output_carrier, tc.region, step, x);
                break;
            case TechKind::conversion:
                if (tech->capacity_basis == CapacityBasis::output) {
                    add(tech->output_carrier, tc.region, step, x);
                    add(tech->input_carrier, tc.region, step, -x / tech->efficiency);
                } else {
                    add(tech->output_carrier, tc.region, step, x * tech->efficiency);
                    add(tech->input_carrier, tc.region, step, -x);
                }
                break;
            case TechKind::storage:
                add(tech->output_carrier, tc.region, step, x - value_of(s, tc.charge[b]) * tc.hours);
                break;
            }
        }
        if (tech->kind == TechKind::storage) {
            const double eta = std::sqrt(tech->efficiency);
            const std::size_t n = tc.level.size();
            for (std::size_t b = 0; b < n; ++b) {
                const double prev = value_of(s, tc.level[(b + n - 1) % n]);
                const double step = eta * tc.hours * value_of(s, tc.charge[b]) -
                                    tc.hours * value_of(s, tc.dispatch[b]) / eta;
                out.max_storage_closure =
                    std::max(out.max_storage_closure, std::fabs(value_of(s, tc.level[b]) - prev - step));
            }
        }
    }
    for (const auto& lc : cat.lines) {
        const TransmissionLine* line = sys.find_line(lc.line);
        const double received = 1.0 - line->losses;
        for (std::size_t b = 0; b < lc.forward.size(); ++b) {
            const int step = static_cast<int>(b) * lc.hours;
            const double fwd = value_of(s, lc.forward[b]) * lc.hours;
            const double bwd = value_of(s, lc.backward[b]) * lc.hours;
            add(line->carrier, line->from, step, received * bwd - fwd);
            add(line->carrier, line->to, step, received * fwd - bwd);
        }
    }
    for (const auto& d : sys.demands) {
        auto it = cat.demand_slices.find(d.id);
        if (it == cat.demand_slices.end()) {
            continue;
        }
        const int res = grid.resolution(d.carrier);
        for (std::size_t b = 0; b < it->second.size(); ++b) {
            add(d.carrier, d.region, static_cast<int>(b) * res, -value_of(s, it->second[b]));
        }
    }
    for (const auto& [carrier, by_node] : net) {
        for (const auto& [node, v] : by_node) {
            for (double r : v) {
                out.max_balance_residual = std::max(out.max_balance_residual, std::fabs(r));
            }
        }
    }
    for (const auto& [key, gwh] : line_exchange(model, s)) {
        out.net_exchange_sum_twh += gwh * model.year_weight / 1e3;
    }
    return out;
}

OutputFormat parse_output_format(std::string_view text)
{
    if (text == "csv") {
        return OutputFormat::csv;
    }
    if (text == "jsonl") {
        return OutputFormat::jsonl;
    }
    throw Error("unknown output format '" + std::string(text) + "' (expected csv or jsonl)");
}

namespace {

struct Cell {
    std::string text;
    bool numeric = false;
};

Cell num(double v)
{
    return {csv::format_significant(tidy(v)), true};
}
Cell num(int v)
{
    return {std::to_string(v), true};
}
Cell str(std::string s)
{
    return {std::move(s), false};
}

struct OutTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

void write_table(const OutTable& t, OutputFormat format, const fs::path& dir)
{
    const fs::path path = dir / (t.name + (format == OutputFormat::csv ? ".csv" : ".jsonl"));
    std::ostringstream body;
    if (format == OutputFormat::csv) {
        csv::write_record(body, t.header);
        for (const auto& row : t.rows) {
            std::vector<std::string> fields;
            fields.reserve(row.size());
            for (const auto& c : row) {
                fields.push_back(c.text);
            }
            csv::write_record(body, fields);
        }
    } else {
        for (const auto& row : t.rows) {
            body << '{';
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) {
                    body << ',';
                }
                body << nlohmann::json(t.header[i]).dump() << ':';
                const bool finite_number =
                    row[i].numeric && row[i].text.find_first_of("in") == std::string::npos;
                body << (finite_number ? row[i].text : nlohmann::json(row[i].text).dump());
            }
            body << "}\n";
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << body.str();
    out.close();
    if (!out) {
        throw Error("error while writing " + path.string());
    }
}

/// Shortest decimal form of a sweep level, for directory names: 0.5 → "0.5".
std::string level_label(double v)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", tidy(v));
    return buffer;
}

void make_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create " + dir.string() + ": " + ec.message());
    }
}

} // namespace

void emit(const ScenarioResult& r, OutputFormat format, const fs::path& dir)
{
    make_dir(dir);
    std::vector<OutTable> tables;

    OutTable summary{"summary", {"key", "value"}, {}};
    summary.rows.push_back({str("scenario"), str(r.scenario)});
    if (!r.axis.empty()) {
        summary.rows.push_back({str("axis"), str(r.axis)});
        summary.rows.push_back({str("axis_value"), num(r.axis_value)});
    }
    summary.rows.push_back({str("status"), str(std::string(to_string(r.status)))});
    summary.rows.push_back({str("objective_bn_eur"), num(r.objective_bn_eur)});
    summary.rows.push_back({str("expansion_twkm"), num(r.expansion_twkm)});
    for (const auto& [cls, gw] : r.class_totals) {
        summary.rows.push_back({str("capacity_gw:" + cls), num(gw)});
    }
    tables.push_back(std::move(summary));

    OutTable caps{"capacities", {"region", "tech", "class", "existing_gw", "new_gw", "total_gw", "energy_gwh"}, {}};
    for (const auto& c : r.capacities) {
        caps.rows.push_back({str(c.region), str(c.tech), str(c.tech_class), num(c.existing_gw), num(c.new_gw),
                             num(c.total_gw), num(c.energy_gwh)});
    }
    tables.push_back(std::move(caps));

    OutTable costs{"costs", {"category", "bn_eur_per_year"}, {}};
    costs.rows.push_back({str("battery_investment"), num(r.costs.battery)});
    costs.rows.push_back({str("generation_investment"), num(r.costs.generation)});
    costs.rows.push_back({str("operational"), num(r.costs.operational)});
    costs.rows.push_back({str("transmission_investment"), num(r.costs.transmission)});
    costs.rows.push_back({str("total"), num(r.costs.total())});
    tables.push_back(std::move(costs));

    OutTable tech{"tech_costs", {"tech", "class", "investment_meur_per_year", "operational_meur_per_year"}, {}};
    for (const auto& t : r.tech_costs) {
        tech.rows.push_back({str(t.tech), str(t.tech_class), num(t.investment_meur), num(t.operational_meur)});
    }
    tables.push_back(std::move(tech));

    OutTable exch{"exchange", {"region", "carrier", "net_import_twh"}, {}};
    for (const auto& e : r.exchange) {
        exch.rows.push_back({str(e.region), str(e.carrier), num(e.net_import_twh)});
    }
    tables.push_back(std::move(exch));

    OutTable exp{"expansion",
                 {"line", "carrier", "from", "to", "length_km", "existing_gw", "expansion_gw", "twkm"},
                 {}};
    for (const auto& e : r.expansion) {
        exp.rows.push_back({str(e.line), str(e.carrier), str(e.from), str(e.to), num(e.length_km),
                            num(e.existing_gw), num(e.expansion_gw), num(e.twkm)});
    }
    tables.push_back(std::move(exp));

    OutTable assumptions{"assumptions", {"assumption"}, {}};
    for (const auto& a : r.assumptions) {
        assumptions.rows.push_back({str(a)});
    }
    tables.push_back(std::move(assumptions));

    const fs::path stale = dir / (format == OutputFormat::csv ? "dispatch.csv" : "dispatch.jsonl");
    if (!r.dispatch.empty()) {
        OutTable disp{"dispatch", {"region", "owner", "variable", "block", "start_hour", "hours", "value"}, {}};
        for (const auto& d : r.dispatch) {
            disp.rows.push_back({str(d.region), str(d.owner), str(d.variable), num(d.block), num(d.start_hour),
                                 num(d.hours), num(d.value)});
        }
        tables.push_back(std::move(disp));
    } else {
        std::error_code ec;
        fs::remove(stale, ec);
    }

    for (const auto& t : tables) {
        write_table(t, format, dir);
    }
}

void emit_sweep(const std::vector<ScenarioResult>& results, OutputFormat format, const fs::path& dir)
{
    make_dir(dir);
    std::set<std::string> classes;
    for (const auto& r : results) {
        for (const auto& [cls, _] : r.class_totals) {
            classes.insert(cls);
        }
    }
    OutTable curve{"substitution_curve", {"axis", "level", "status", "total_cost_bn_eur", "expansion_twkm"}, {}};
    for (const auto& cls : classes) {
        curve.header.push_back(cls + "_gw");
    }
    for (const auto& r : results) {
        emit(r, format, dir / (r.axis + "_" + level_label(r.axis_value)));
        std::vector<Cell> row{str(r.axis), num(r.axis_value), str(std::string(to_string(r.status))),
                              num(r.objective_bn_eur), num(r.expansion_twkm)};
        for (const auto& cls : classes) {
            auto it = r.class_totals.find(cls);
            row.push_back(num(it == r.class_totals.end() ? 0.0 : it->second));
        }
        curve.rows.push_back(std::move(row));
    }
    write_table(curve, format, dir);
}

} // namespace enplan
