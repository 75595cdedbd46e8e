#include "enplan/orchestrator.hpp"

#include "enplan/csv.hpp"
#include "enplan/error.hpp"
#include "enplan/mps.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace enplan {

namespace fs = std::filesystem;

SolverConfig SolverConfig::from_environment()
{
    SolverConfig cfg;
    const char* value = std::getenv(kSolverEnv);
    if (value != nullptr && std::string_view(value) != "builtin" && *value != '\0') {
        cfg.command = value;
    }
    return cfg;
}

namespace {

std::string quote(const fs::path& p)
{
    std::string out = "'";
    for (char ch : p.string()) {
        if (ch == '\'') {
            out += "'\\''";
        } else {
            out += ch;
        }
    }
    return out + "'";
}

std::string substitute(std::string text, const std::string& key, const std::string& value)
{
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

LpSolution run_external(const LpProblem& problem, const std::string& command)
{
    static std::atomic<long> counter{0};
    const fs::path dir = fs::temp_directory_path() /
                         ("enplan-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(dir);
    struct Cleanup {
        fs::path dir;
        ~Cleanup()
        {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{dir};

    const auto exported = export_mps(problem);
    const fs::path mps = dir / "problem.mps";
    const fs::path names = dir / "names.csv";
    const fs::path solution = dir / "solution.csv";
    {
        std::ofstream out(mps, std::ios::binary);
        out << exported.text;
        std::ofstream map(names, std::ios::binary);
        map << exported.names.to_csv(problem);
        if (!out || !map) {
            throw Error("cannot write solver input in " + dir.string());
        }
    }
    std::string cmd = substitute(command, "{mps}", quote(mps));
    cmd = substitute(cmd, "{names}", quote(names));
    cmd = substitute(cmd, "{solution}", quote(solution));
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
        throw Error("external solver command failed (status " + std::to_string(rc) + "): " + cmd);
    }
    std::ifstream in(solution, std::ios::binary);
    if (!in) {
        throw Error("external solver wrote no solution file: " + solution.string());
    }
    LpSolution sol = import_solution(in, problem, &exported.names);
    sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sol.status == SolveStatus::optimal) {
        const auto chk = check_solution(problem, sol);
        if (chk.primal_residual > 1e-6) {
            throw Error("external solution violates constraints (residual " +
                        csv::format_significant(chk.primal_residual) + ")");
        }
    }
    return sol;
}

SolveRecord record(const std::string& label, const LpProblem& p, const LpSolution& s)
{
    return {label, s.status, s.objective, s.iterations, p.num_rows(), p.num_columns(), p.nonzeros()};
}

} // namespace

Overlay overlay_for(const ScenarioConfig& s)
{
    switch (s.overlay) {
    case OverlayKind::integrated:
    case OverlayKind::disintegrated:
        return {Overlay::Kind::integrated, 0.0, {}};
    case OverlayKind::central:
        return {Overlay::Kind::central, s.overlay_value, {}};
    case OverlayKind::decentral:
        return {Overlay::Kind::decentral, 0.0, {}};
    case OverlayKind::grid_cap:
        return {Overlay::Kind::grid_cap, s.overlay_value, {}};
    case OverlayKind::offshore_fix:
        return {Overlay::Kind::offshore_fix, s.overlay_value, {}};
    }
    return {};
}

LpSolution run_solver(const LpProblem& problem, const SolverConfig& solver)
{
    if (solver.command.empty()) {
        return solve(problem, solver.options);
    }
    return run_external(problem, solver.command);
}

bool ScenarioRun::optimal() const
{
    if (solves.empty()) {
        return false;
    }
    return std::all_of(solves.begin(), solves.end(),
                       [](const SolveRecord& r) { return r.status == SolveStatus::optimal; });
}

ScenarioRun run_scenario(const EnergySystem& system, const ScenarioConfig& scenario, const RunOptions& options,
                         const Fixings& fixings)
{
    const auto errors = scenario_errors(scenario, system);
    if (!errors.empty()) {
        throw Error("scenario '" + scenario.name + "': " + errors.front());
    }
    ScenarioRun run;
    run.model = build(system, scenario, grid_for(system));
    auto solve_step = [&](LpProblem problem, const std::string& label) {
        if (!fixings.values.empty()) {
            fix_columns(problem, fixings.values, fixings.mode, fixings.band);
        }
        run.solution = run_solver(problem, options.solver);
        run.solves.push_back(record(label, problem, run.solution));
        run.problem = std::move(problem);
        return run.solution.status == SolveStatus::optimal;
    };

    bool ok = false;
    if (scenario.overlay == OverlayKind::disintegrated) {
        const Overlay phase_a{Overlay::Kind::disintegrated_phase_a, 0.0, {}};
        ok = solve_step(apply_scenario_overlay(run.model.problem, run.model, {phase_a}), "phase-a");
        if (ok) {
            const Overlay phase_b{Overlay::Kind::disintegrated_phase_b, 0.0,
                                  investment_values(run.model, run.solution, false)};
            ok = solve_step(apply_scenario_overlay(run.model.problem, run.model, {phase_b}), "phase-b");
        }
    } else {
        ok = solve_step(apply_scenario_overlay(run.model.problem, run.model, {overlay_for(scenario)}), "solve");
    }
    if (ok) {
        run.result = summarize(run.model, run.problem, run.solution, scenario.name, options.summary);
    } else {
        run.result.scenario = scenario.name;
        run.result.status = run.solution.status;
    }
    return run;
}

SweepAxis parse_sweep_axis(std::string_view text)
{
    if (text == "grid_cap") {
        return SweepAxis::grid_cap;
    }
    if (text == "offshore") {
        return SweepAxis::offshore;
    }
    throw Error("unknown sweep axis '" + std::string(text) + "' (expected grid_cap or offshore)");
}

std::string_view to_string(SweepAxis axis)
{
    return axis == SweepAxis::grid_cap ? "grid_cap" : "offshore";
}

std::vector<double> default_levels(SweepAxis axis, const EnergySystem& system)
{
    if (axis == SweepAxis::grid_cap) {
        return {0.0, 0.25, 0.5, 0.75, 1.0};
    }
    const double top = system.defaults.central_offshore_gw;
    return {0.2 * top, 0.4 * top, 0.6 * top, 0.8 * top, top};
}

SweepResult sweep(const EnergySystem& system, const ScenarioConfig& base, SweepAxis axis,
                  const std::vector<double>& levels, const RunOptions& options)
{
    if (base.overlay != OverlayKind::integrated) {
        throw Error("sweep: base scenario must use the integrated overlay, not '" +
                    std::string(to_string(base.overlay)) + "'");
    }
    if (levels.empty()) {
        throw Error("sweep: no levels given");
    }
    if (!std::is_sorted(levels.begin(), levels.end())) {
        throw Error("sweep: levels must be sorted ascending");
    }
    std::vector<ScenarioConfig> configs;
    for (double level : levels) {
        ScenarioConfig cfg = base;
        cfg.overlay = axis == SweepAxis::grid_cap ? OverlayKind::grid_cap : OverlayKind::offshore_fix;
        cfg.overlay_value = level;
        cfg.name = base.name + "/" + std::string(to_string(axis)) + "=" + csv::format_significant(level);
        const auto errors = scenario_errors(cfg, system);
        if (!errors.empty()) {
            throw Error("sweep level " + csv::format_significant(level) + ": " + errors.front());
        }
        configs.push_back(std::move(cfg));
    }

    // Each level owns its model and solution; the system is shared read-only.
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<ScenarioRun>> pending(configs.size());
    SweepResult out;
    std::size_t launched = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        while (launched < configs.size() && launched < i + width) {
            pending[launched] = std::async(std::launch::async, [&system, &options, cfg = configs[launched]]() {
                return run_scenario(system, cfg, options);
            });
            ++launched;
        }
        try {
            ScenarioRun run = pending[i].get();
            run.result.axis = std::string(to_string(axis));
            run.result.axis_value = levels[i];
            if (!run.optimal()) {
                out.error = "level " + csv::format_significant(levels[i]) + ": solver status " +
                            std::string(to_string(run.solution.status));
                out.results.push_back(std::move(run.result));
                break;
            }
            out.results.push_back(std::move(run.result));
        } catch (const std::exception& e) {
            out.error = "level " + csv::format_significant(levels[i]) + ": " + e.what();
            break;
        }
    }
    for (std::size_t i = 0; i < launched; ++i) {
        if (pending[i].valid()) {
            try {
                pending[i].get();
            } catch (const std::exception&) {
            }
        }
    }
    return out;
}

TwoStageResult run_two_stage(const EnergySystem& continental, const EnergySystem& regional,
                             const ScenarioConfig& scenario, const RunOptions& options)
{
    TwoStageResult out;
    for (const auto& r : regional.regions) {
        if (regional.is_container(r.id)) {
            out.focus_countries.push_back(r.id);
        }
    }
    if (out.focus_countries.empty()) {
        throw Error("two-stage: the regional system has no country split into subregions");
    }
    const std::set<std::string> focus(out.focus_countries.begin(), out.focus_countries.end());
    std::set<std::string> outside_c;
    std::set<std::string> outside_r;
    for (const auto& n : continental.nodes()) {
        if (focus.count(n) == 0) {
            outside_c.insert(n);
        }
    }
    for (const auto& f : out.focus_countries) {
        const auto nodes = continental.nodes();
        if (std::find(nodes.begin(), nodes.end(), f) == nodes.end()) {
            throw Error("two-stage: focus country " + f + " is not a node of the continental system");
        }
    }
    for (const auto& n : regional.nodes()) {
        if (focus.count(regional.country_of(n)) == 0) {
            outside_r.insert(n);
        }
    }
    if (outside_c != outside_r) {
        throw Error("two-stage: non-focus nodes differ between the continental and regional systems");
    }

    ScenarioConfig stage1 = scenario;
    stage1.overlay = OverlayKind::integrated;
    stage1.overlay_value = 0.0;
    stage1.stage = Stage::continental;
    stage1.name = scenario.name + "/continental";
    out.continental = run_scenario(continental, stage1, options);
    if (!out.continental.optimal()) {
        return out;
    }

    const auto& m1 = out.continental.model;
    const auto& s1 = out.continental.solution;
    auto put = [&](int j) {
        if (j >= 0) {
            out.fixed[m1.problem.column(j).name] = s1.primal.at(static_cast<std::size_t>(j));
        }
    };
    for (const auto& tc : m1.catalog.technologies) {
        if (focus.count(continental.country_of(tc.region)) == 0) {
            put(tc.capacity);
            put(tc.energy);
        }
    }
    for (const auto& lc : m1.catalog.lines) {
        const TransmissionLine* line = continental.find_line(lc.line);
        if (focus.count(line->from) == 0 && focus.count(line->to) == 0) {
            put(lc.expansion);
        }
    }

    ScenarioConfig stage2 = scenario;
    stage2.stage = Stage::regional;
    stage2.name = scenario.name + "/regional";
    Fixings fix{out.fixed, scenario.foreign_deviation > 0.0 ? FixMode::deviation : FixMode::equal,
                scenario.foreign_deviation};
    try {
        out.regional = run_scenario(regional, stage2, options, fix);
    } catch (const Error& e) {
        throw Error(std::string("two-stage, stage 2: ") + e.what());
    }
    if (!out.regional.optimal()) {
        // Locate the binding fixings: allow them to grow and report those that did.
        Fixings relaxed = fix;
        relaxed.mode = FixMode::at_least;
        const ScenarioRun probe = run_scenario(regional, stage2, options, relaxed);
        if (probe.optimal()) {
            for (const auto& [name, value] : out.fixed) {
                const int j = probe.model.catalog.column_of(name, probe.problem);
                const double got = probe.solution.primal.at(static_cast<std::size_t>(j));
                if (got > value + 1e-6 * (1.0 + std::fabs(value))) {
                    out.exceeded.push_back(name + " fixed at " + csv::format_significant(value) + " needs " +
                                           csv::format_significant(got));
                }
            }
        } else {
            out.exceeded.push_back("stage 2 stays infeasible with the fixed investments relaxed upwards");
        }
        return out;
    }

    for (const auto& country : out.focus_countries) {
        std::map<std::string, double> c_tot;
        std::map<std::string, double> r_tot;
        for (const auto& row : out.continental.result.capacities) {
            if (row.region == country) {
                c_tot[row.tech_class] += row.total_gw;
            }
        }
        for (const auto& row : out.regional.result.capacities) {
            if (regional.country_of(row.region) == country) {
                r_tot[row.tech_class] += row.total_gw;
            }
        }
        std::set<std::string> classes;
        for (const auto& [k, _] : c_tot) {
            classes.insert(k);
        }
        for (const auto& [k, _] : r_tot) {
            classes.insert(k);
        }
        for (const auto& cls : classes) {
            out.reconcile.push_back({country, cls, c_tot[cls], r_tot[cls], r_tot[cls] - c_tot[cls]});
        }
    }
    return out;
}

} // namespace enplan
