#include "enplan/costing.hpp"
#include "enplan/error.hpp"
#include "enplan/instances.hpp"
#include "enplan/mps.hpp"
#include "enplan/orchestrator.hpp"
#include "enplan/system_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <limits>
#include <optional>

namespace py = pybind11;
using namespace enplan;

namespace {

py::dict to_dict(const ScenarioResult& r)
{
    py::dict out;
    out["scenario"] = r.scenario;
    out["status"] = std::string(to_string(r.status));
    out["objective_bn_eur"] = r.objective_bn_eur;
    out["expansion_twkm"] = r.expansion_twkm;
    out["class_totals"] = r.class_totals;
    if (!r.axis.empty()) {
        out["axis"] = r.axis;
        out["axis_value"] = r.axis_value;
    }
    py::list caps;
    for (const auto& c : r.capacities) {
        py::dict row;
        row["region"] = c.region;
        row["tech"] = c.tech;
        row["class"] = c.tech_class;
        row["existing_gw"] = c.existing_gw;
        row["new_gw"] = c.new_gw;
        row["total_gw"] = c.total_gw;
        row["energy_gwh"] = c.energy_gwh;
        caps.append(row);
    }
    out["capacities"] = caps;
    py::dict costs;
    costs["battery"] = r.costs.battery;
    costs["generation"] = r.costs.generation;
    costs["operational"] = r.costs.operational;
    costs["transmission"] = r.costs.transmission;
    costs["total"] = r.costs.total();
    out["costs"] = costs;
    py::list exchange;
    for (const auto& e : r.exchange) {
        py::dict row;
        row["region"] = e.region;
        row["carrier"] = e.carrier;
        row["net_import_twh"] = e.net_import_twh;
        exchange.append(row);
    }
    out["exchange"] = exchange;
    return out;
}

py::list to_list(const std::vector<SolveRecord>& solves)
{
    py::list out;
    for (const auto& s : solves) {
        py::dict row;
        row["label"] = s.label;
        row["status"] = std::string(to_string(s.status));
        row["objective"] = s.objective;
        row["iterations"] = s.iterations;
        row["rows"] = s.rows;
        row["columns"] = s.columns;
        out.append(row);
    }
    return out;
}

RunOptions options_from_env()
{
    RunOptions o;
    o.solver = SolverConfig::from_environment();
    return o;
}

/// Dense LP in linprog form: min c·x, A_ub·x <= b_ub, A_eq·x = b_eq, bounds per column (None = infinite).
py::dict solve_dense(const std::vector<double>& c, const std::vector<std::vector<double>>& a_ub,
                     const std::vector<double>& b_ub, const std::vector<std::vector<double>>& a_eq,
                     const std::vector<double>& b_eq,
                     const std::vector<std::pair<std::optional<double>, std::optional<double>>>& bounds)
{
    const double inf = std::numeric_limits<double>::infinity();
    if (!bounds.empty() && bounds.size() != c.size()) {
        throw Error("bounds must have one (lower, upper) pair per column");
    }
    LpProblem lp;
    for (std::size_t j = 0; j < c.size(); ++j) {
        double lo = 0.0;
        double up = inf;
        if (!bounds.empty()) {
            lo = bounds[j].first.value_or(-inf);
            up = bounds[j].second.value_or(inf);
        }
        lp.add_column("x" + std::to_string(j), lo, up, c[j]);
    }
    auto add_rows = [&](const std::vector<std::vector<double>>& a, const std::vector<double>& b, RowSense sense,
                        const std::string& prefix) {
        if (a.size() != b.size()) {
            throw Error(prefix + ": matrix and right-hand side differ in length");
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].size() != c.size()) {
                throw Error(prefix + ": row " + std::to_string(i) + " has the wrong length");
            }
            const int r = lp.add_row(prefix + std::to_string(i), sense, b[i]);
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (a[i][j] != 0.0) {
                    lp.add_coefficient(r, static_cast<int>(j), a[i][j]);
                }
            }
        }
    };
    add_rows(a_ub, b_ub, RowSense::less_equal, "ub");
    add_rows(a_eq, b_eq, RowSense::equal, "eq");
    const LpSolution s = solve(lp);
    py::dict out;
    out["status"] = std::string(to_string(s.status));
    out["objective"] = s.objective;
    out["x"] = s.primal;
    out["iterations"] = s.iterations;
    return out;
}

} // namespace

PYBIND11_MODULE(enplan, m)
{
    m.doc() = "Capacity expansion planning with sector coupling and regional resolution";

    py::register_exception<Error>(m, "Error");

    m.def("annuity_factor", &annuity_factor, py::arg("rate"), py::arg("lifetime_years"));
    m.def("grid_unit_cost_from_line", &grid_unit_cost_from_line, py::arg("cost_per_km"),
          py::arg("line_capacity_gw"));

    py::class_<EnergySystem>(m, "EnergySystem")
        .def_readonly("horizon_hours", &EnergySystem::horizon_hours)
        .def_property_readonly("nodes", &EnergySystem::nodes)
        .def_property_readonly("technologies",
                               [](const EnergySystem& s) {
                                   std::vector<std::string> ids;
                                   for (const auto& t : s.technologies) {
                                       ids.push_back(t.id);
                                   }
                                   return ids;
                               })
        .def_property_readonly("carriers",
                               [](const EnergySystem& s) {
                                   std::vector<std::string> ids;
                                   for (const auto& c : s.carriers) {
                                       ids.push_back(c.id);
                                   }
                                   return ids;
                               })
        .def("validate",
             [](const EnergySystem& s) {
                 std::vector<std::pair<std::string, std::string>> out;
                 for (const auto& v : validate(s)) {
                     out.emplace_back(v.entity, v.rule);
                 }
                 return out;
             })
        .def("save", [](const EnergySystem& s, const std::filesystem::path& dir) { save_system(s, dir); },
             py::arg("dir"));

    m.def("load_system", &load_system, py::arg("dir"));
    m.def(
        "desk_instance",
        [](int horizon, int electricity_resolution, int hydrogen_resolution, std::uint32_t seed) {
            return desk_instance({horizon, electricity_resolution, hydrogen_resolution, seed});
        },
        py::arg("horizon_hours") = 168, py::arg("electricity_resolution") = 3, py::arg("hydrogen_resolution") = 24,
        py::arg("seed") = 2040);
    m.def("toy_continental", &toy_continental, py::arg("horizon_hours") = 24);
    m.def("toy_regional", &toy_regional, py::arg("horizon_hours") = 24);
    m.def("random_system", &random_system, py::arg("seed"), py::arg("horizon_hours") = 24);

    m.def(
        "run",
        [](const EnergySystem& s, const std::string& scenario, const std::vector<std::string>& overlays) {
            ScenarioRun run;
            {
                py::gil_scoped_release release;
                run = run_scenario(s, parse_scenario(scenario, overlays, s), options_from_env());
            }
            py::dict out = to_dict(run.result);
            out["solves"] = to_list(run.solves);
            out["optimal"] = run.optimal();
            return out;
        },
        py::arg("system"), py::arg("scenario") = "integrated", py::arg("overlays") = std::vector<std::string>{},
        "Solves one scenario; the solver follows ENPLAN_SOLVER.");

    m.def(
        "sweep",
        [](const EnergySystem& s, const std::string& axis, std::optional<std::vector<double>> levels,
           const std::string& scenario, const std::vector<std::string>& overlays) {
            const SweepAxis a = parse_sweep_axis(axis);
            const std::vector<double> lv = levels ? *levels : default_levels(a, s);
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = sweep(s, parse_scenario(scenario, overlays, s), a, lv, options_from_env());
            }
            py::list out;
            for (const auto& res : r.results) {
                out.append(to_dict(res));
            }
            if (r.error) {
                throw Error("sweep " + *r.error);
            }
            return out;
        },
        py::arg("system"), py::arg("axis"), py::arg("levels") = py::none(), py::arg("scenario") = "integrated",
        py::arg("overlays") = std::vector<std::string>{});

    m.def(
        "two_stage",
        [](const EnergySystem& continental, const EnergySystem& regional, const std::string& scenario,
           const std::vector<std::string>& overlays) {
            TwoStageResult r;
            {
                py::gil_scoped_release release;
                r = run_two_stage(continental, regional, parse_scenario(scenario, overlays, regional),
                                  options_from_env());
            }
            py::dict out;
            out["optimal"] = r.optimal();
            out["continental"] = to_dict(r.continental.result);
            out["regional"] = to_dict(r.regional.result);
            out["fixed"] = r.fixed;
            out["exceeded"] = r.exceeded;
            py::list rec;
            for (const auto& row : r.reconcile) {
                py::dict d;
                d["country"] = row.country;
                d["class"] = row.tech_class;
                d["continental_gw"] = row.continental_gw;
                d["regional_gw"] = row.regional_gw;
                d["difference_gw"] = row.difference_gw;
                rec.append(d);
            }
            out["reconcile"] = rec;
            return out;
        },
        py::arg("continental"), py::arg("regional"), py::arg("scenario") = "integrated",
        py::arg("overlays") = std::vector<std::string>{});

    m.def(
        "export_mps",
        [](const EnergySystem& s, const std::string& scenario, const std::vector<std::string>& overlays) {
            const ScenarioConfig cfg = parse_scenario(scenario, overlays, s);
            if (cfg.overlay == OverlayKind::disintegrated) {
                throw Error("export_mps: the disintegrated scenario is a two-phase procedure");
            }
            const BuiltModel model = build(s, cfg, grid_for(s));
            const LpProblem problem = apply_scenario_overlay(model.problem, model, {overlay_for(cfg)});
            const MpsExport e = export_mps(problem);
            return py::make_tuple(e.text, e.names.to_csv(problem));
        },
        py::arg("system"), py::arg("scenario") = "integrated", py::arg("overlays") = std::vector<std::string>{},
        "Returns (mps_text, names_csv).");

    m.def("solve_lp", &solve_dense, py::arg("c"), py::arg("A_ub") = std::vector<std::vector<double>>{},
          py::arg("b_ub") = std::vector<double>{}, py::arg("A_eq") = std::vector<std::vector<double>>{},
          py::arg("b_eq") = std::vector<double>{},
          py::arg("bounds") = std::vector<std::pair<std::optional<double>, std::optional<double>>>{},
          "Built-in simplex on a dense LP given in scipy.optimize.linprog form.");
}
