#include "enplan/csv.hpp"
#include "enplan/error.hpp"
#include "enplan/instances.hpp"
#include "enplan/mps.hpp"
#include "enplan/orchestrator.hpp"
#include "enplan/system_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace enplan;

namespace {

void write_solves(const fs::path& path, const std::vector<SolveRecord>& solves)
{
    std::ofstream out(path, std::ios::binary);
    csv::write_record(out, {"label", "status", "objective", "iterations", "rows", "columns", "nonzeros"});
    for (const auto& s : solves) {
        csv::write_record(out, {s.label, std::string(to_string(s.status)), csv::format_significant(s.objective, 10),
                                std::to_string(s.iterations), std::to_string(s.rows), std::to_string(s.columns),
                                std::to_string(s.nonzeros)});
    }
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

void report_solves(const std::vector<SolveRecord>& solves)
{
    for (const auto& s : solves) {
        std::cerr << s.label << ": " << to_string(s.status) << ", objective " << csv::format_significant(s.objective)
                  << ", " << s.iterations << " iterations, " << s.rows << " rows x " << s.columns << " columns\n";
    }
}

bool all_optimal(const std::vector<SolveRecord>& solves)
{
    if (solves.empty()) {
        return false;
    }
    for (const auto& s : solves) {
        if (s.status != SolveStatus::optimal) {
            return false;
        }
    }
    return true;
}

std::vector<double> parse_levels(const std::string& text)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(csv::parse_double(item, "--levels"));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

RunOptions run_options(bool dispatch, int week)
{
    RunOptions options;
    options.solver = SolverConfig::from_environment();
    options.summary.dispatch = dispatch;
    if (week >= 0) {
        options.summary.dispatch = true;
        options.summary.week = week;
    }
    return options;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Capacity expansion planning with sector coupling and regional resolution"};
    app.require_subcommand(1);

    std::string system_dir;
    std::string scenario = "integrated";
    std::vector<std::string> overlays;
    std::string out_dir;
    std::string format = "csv";
    bool dispatch = false;
    int week = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario, "Scenario name, e.g. integrated, decentral-EFF, central");
        cmd->add_option("--overlay", overlays, "Overlay key=value (central=GW, offshore_fix=GW, grid_cap=f, "
                                               "demand=REF|EFF, foreign_deviation=f)");
        cmd->add_option("--out", out_dir, "Output directory")->required();
        cmd->add_option("--format", format, "Output format: csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
        cmd->add_flag("--dispatch", dispatch, "Also write the dispatch table");
        cmd->add_option("--week", week, "Restrict dispatch output to one week (implies --dispatch)")
            ->check(CLI::NonNegativeNumber);
    };

    auto* run = app.add_subcommand("run", "Solve one scenario");
    run->add_option("--system", system_dir, "System directory")->required()->check(CLI::ExistingDirectory);
    add_common(run);

    std::string axis_text;
    std::string levels_text;
    auto* sweep_cmd = app.add_subcommand("sweep", "Solve one scenario per level of a sensitivity axis");
    sweep_cmd->add_option("--system", system_dir, "System directory")->required()->check(CLI::ExistingDirectory);
    sweep_cmd->add_option("--axis", axis_text, "grid_cap or offshore")
        ->required()
        ->check(CLI::IsMember({"grid_cap", "offshore"}));
    sweep_cmd->add_option("--levels", levels_text, "Comma-separated ascending levels; defaults per axis");
    add_common(sweep_cmd);

    std::string continental_dir;
    std::string regional_dir;
    auto* twostage = app.add_subcommand("twostage", "Continental solve, then regional solve with foreign "
                                                    "investments fixed");
    twostage->add_option("--continental", continental_dir, "Continental system directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    twostage->add_option("--regional", regional_dir, "Regional system directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    add_common(twostage);

    auto* export_cmd = app.add_subcommand("export", "Write the scenario LP as fixed-format MPS");
    export_cmd->add_option("--system", system_dir, "System directory")->required()->check(CLI::ExistingDirectory);
    export_cmd->add_option("--scenario", scenario, "Scenario name");
    export_cmd->add_option("--overlay", overlays, "Overlay key=value");
    export_cmd->add_option("--out", out_dir, "Output directory")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Check a system directory");
    validate_cmd->add_option("--system", system_dir, "System directory")->required()->check(CLI::ExistingDirectory);

    std::string instance;
    unsigned seed = 1;
    int horizon = 0;
    auto* generate = app.add_subcommand("generate", "Write a built-in instance as a system directory");
    generate->add_option("instance", instance, "desk, toy3 or random")
        ->required()
        ->check(CLI::IsMember({"desk", "toy3", "random"}));
    generate->add_option("--out", out_dir, "Output directory")->required();
    generate->add_option("--seed", seed, "Seed for random instances");
    generate->add_option("--horizon", horizon, "Horizon in hours")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path out(out_dir);
        const OutputFormat fmt = parse_output_format(format);

        if (*run) {
            const EnergySystem system = load_system(system_dir);
            const ScenarioConfig cfg = parse_scenario(scenario, overlays, system);
            const ScenarioRun result = run_scenario(system, cfg, run_options(dispatch, week));
            report_solves(result.solves);
            fs::create_directories(out);
            write_solves(out / "solves.csv", result.solves);
            if (result.optimal()) {
                emit(result.result, fmt, out);
            }
            return result.optimal() ? 0 : 1;
        }

        if (*sweep_cmd) {
            const EnergySystem system = load_system(system_dir);
            const ScenarioConfig base = parse_scenario(scenario, overlays, system);
            const SweepAxis axis = parse_sweep_axis(axis_text);
            const std::vector<double> levels =
                levels_text.empty() ? default_levels(axis, system) : parse_levels(levels_text);
            const SweepResult result = sweep(system, base, axis, levels, run_options(dispatch, week));
            emit_sweep(result.results, fmt, out);
            if (result.error) {
                std::cerr << "sweep stopped: " << *result.error << "\n";
                return 1;
            }
            for (const auto& r : result.results) {
                std::cerr << r.scenario << ": objective " << csv::format_significant(r.objective_bn_eur)
                          << " bn EUR, expansion " << csv::format_significant(r.expansion_twkm) << " TWkm\n";
            }
            return 0;
        }

        if (*twostage) {
            const EnergySystem continental = load_system(continental_dir);
            const EnergySystem regional = load_system(regional_dir);
            const ScenarioConfig cfg = parse_scenario(scenario, overlays, regional);
            const TwoStageResult result = run_two_stage(continental, regional, cfg, run_options(dispatch, week));
            std::vector<SolveRecord> solves;
            for (auto s : result.continental.solves) {
                s.label = "stage-1/" + s.label;
                solves.push_back(s);
            }
            for (auto s : result.regional.solves) {
                s.label = "stage-2/" + s.label;
                solves.push_back(s);
            }
            report_solves(solves);
            fs::create_directories(out);
            write_solves(out / "solves.csv", solves);
            {
                std::ofstream f(out / "fixed.csv", std::ios::binary);
                csv::write_record(f, {"column", "value"});
                for (const auto& [name, value] : result.fixed) {
                    csv::write_record(f, {name, csv::format_exact(value)});
                }
            }
            {
                std::ofstream f(out / "exceeded.csv", std::ios::binary);
                csv::write_record(f, {"fixing"});
                for (const auto& e : result.exceeded) {
                    csv::write_record(f, {e});
                    std::cerr << "exceeded: " << e << "\n";
                }
            }
            if (result.continental.optimal()) {
                emit(result.continental.result, fmt, out / "continental");
            }
            if (result.optimal()) {
                emit(result.regional.result, fmt, out / "regional");
                std::ofstream f(out / "reconcile.csv", std::ios::binary);
                csv::write_record(f, {"country", "tech_class", "continental_gw", "regional_gw", "difference_gw"});
                for (const auto& r : result.reconcile) {
                    csv::write_record(f, {r.country, r.tech_class, csv::format_significant(r.continental_gw),
                                          csv::format_significant(r.regional_gw),
                                          csv::format_significant(r.difference_gw)});
                }
            }
            return all_optimal(solves) && result.optimal() ? 0 : 1;
        }

        if (*export_cmd) {
            const EnergySystem system = load_system(system_dir);
            const ScenarioConfig cfg = parse_scenario(scenario, overlays, system);
            if (cfg.overlay == OverlayKind::disintegrated) {
                throw Error("export: the disintegrated scenario is a two-phase procedure; export a single phase "
                            "via run with " + std::string(kSolverEnv));
            }
            const auto errors = scenario_errors(cfg, system);
            if (!errors.empty()) {
                throw Error("scenario '" + cfg.name + "': " + errors.front());
            }
            const BuiltModel model = build(system, cfg, grid_for(system));
            const LpProblem problem = apply_scenario_overlay(model.problem, model, {overlay_for(cfg)});
            const MpsExport exported = export_mps(problem);
            fs::create_directories(out);
            std::ofstream(out / "problem.mps", std::ios::binary) << exported.text;
            std::ofstream(out / "names.csv", std::ios::binary) << exported.names.to_csv(problem);
            std::cerr << problem.num_rows() << " rows, " << problem.num_columns() << " columns, "
                      << problem.nonzeros() << " nonzeros\n";
            return 0;
        }

        if (*validate_cmd) {
            const EnergySystem system = load_system(system_dir);
            const auto violations = validate(system);
            for (const auto& v : violations) {
                std::cout << v.entity << ": " << v.rule << "\n";
            }
            return violations.empty() ? 0 : 1;
        }

        if (*generate) {
            if (instance == "desk") {
                DeskOptions o;
                if (horizon > 0) {
                    o.horizon_hours = horizon;
                }
                save_system(desk_instance(o), out);
            } else if (instance == "toy3") {
                const int h = horizon > 0 ? horizon : 24;
                save_system(toy_continental(h), out / "continental");
                save_system(toy_regional(h), out / "regional");
            } else {
                save_system(random_system(seed, horizon > 0 ? horizon : 24), out);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
