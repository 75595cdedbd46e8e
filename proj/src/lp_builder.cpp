#include "enplan/lp_builder.hpp"

#include "enplan/costing.hpp"
#include "enplan/error.hpp"
#include "enplan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace enplan {

std::string_view to_string(VariableKind kind)
{
    switch (kind) {
    case VariableKind::capacity:
        return "capacity";
    case VariableKind::storage_energy_capacity:
        return "storage_energy_capacity";
    case VariableKind::line_expansion:
        return "line_expansion";
    case VariableKind::dispatch:
        return "dispatch";
    case VariableKind::charge:
        return "charge";
    case VariableKind::discharge:
        return "discharge";
    case VariableKind::storage_level:
        return "storage_level";
    case VariableKind::flow_forward:
        return "flow_forward";
    case VariableKind::flow_backward:
        return "flow_backward";
    case VariableKind::demand_slice:
        return "demand_slice";
    }
    return "?";
}

int VariableCatalog::column_of(const std::string& name, const LpProblem& problem) const
{
    for (int j = 0; j < problem.num_columns(); ++j) {
        if (problem.column(j).name == name) {
            return j;
        }
    }
    return -1;
}

const TechnologyColumns* VariableCatalog::find(const std::string& tech, const std::string& region) const
{
    for (const auto& tc : technologies) {
        if (tc.tech == tech && tc.region == region) {
            return &tc;
        }
    }
    return nullptr;
}

const LineColumns* VariableCatalog::find_line(const std::string& line) const
{
    for (const auto& lc : lines) {
        if (lc.line == line) {
            return &lc;
        }
    }
    return nullptr;
}

namespace {

std::string label(std::string_view prefix, std::initializer_list<std::string> parts)
{
    std::string out(prefix);
    out += '[';
    bool first = true;
    for (const auto& p : parts) {
        if (!first) {
            out += ',';
        }
        out += p;
        first = false;
    }
    out += ']';
    return out;
}

class Assembler {
public:
    Assembler(BuiltModel& model) : m_(model), sys_(model.system), lp_(model.problem), cat_(model.catalog) {}

    void run()
    {
        horizon_ = sys_.horizon_hours;
        nodes_ = sys_.nodes();
        balance_rows();
        for (const auto& tech : sys_.technologies) {
            technology(tech);
        }
        for (const auto& line : sys_.lines) {
            transmission(line);
        }
        for (const auto& demand : sys_.demands) {
            demand_rows(demand);
        }
        lp_.objective_unit = 1e6;
    }

private:
    int column(std::string name, double upper, double cost, VariableEntry entry)
    {
        const int j = lp_.add_column(std::move(name), 0.0, upper, cost);
        cat_.entries.push_back(std::move(entry));
        return j;
    }

    int balance(const std::string& carrier, const std::string& node, int block) const
    {
        return cat_.balance_rows.at(carrier).at(node).at(static_cast<std::size_t>(block));
    }

    void balance_rows()
    {
        for (const auto& c : sys_.carriers) {
            const int blocks = m_.grid.block_count(c.id);
            auto& rows = cat_.balance_rows[c.id];
            auto& demand = cat_.fixed_demand[c.id];
            for (const auto& n : nodes_) {
                auto& r = rows[n];
                for (int b = 0; b < blocks; ++b) {
                    r.push_back(lp_.add_row(label("bal", {c.id, n, std::to_string(b)}), RowSense::equal, 0.0));
                }
                demand[n].assign(static_cast<std::size_t>(blocks), 0.0);
            }
        }
    }

    /// Mean availability over `steps`; 1 when the technology has no profile.
    double availability(const Technology& tech, const std::string& node, StepRange steps) const
    {
        if (tech.availability_profile.empty()) {
            return tech.availability_scale;
        }
        const Profile* p = sys_.resolve_profile(tech.availability_profile, node);
        if (p == nullptr) {
            throw Error("technology " + tech.id + ": profile '" + tech.availability_profile +
                        "' not found for " + node);
        }
        double sum = 0.0;
        for (int t = steps.first; t < steps.last; ++t) {
            sum += p->values.at(static_cast<std::size_t>(t));
        }
        return tech.availability_scale * sum / steps.size();
    }

    double variable_cost(const Technology& tech, int hours) const
    {
        // €/MWh × 1e3 MWh/GWh, in M€, weighted to a full year.
        return tech.variable_om * 1e-3 * hours * m_.year_weight;
    }

    /// Operating column bounded by availability and installed capacity.
    int limited_column(const std::string& name, VariableEntry entry, const TechnologyColumns& tc,
                       double avail, double cost, const std::string& row_prefix)
    {
        const std::string block = std::to_string(entry.block);
        if (tc.capacity < 0 || avail <= 0.0) {
            return column(name, std::max(0.0, avail) * tc.existing, cost, std::move(entry));
        }
        const int j = column(name, kUnbounded, cost, std::move(entry));
        const int r = lp_.add_row(label(row_prefix, {tc.tech, tc.region, block}), RowSense::less_equal,
                                  avail * tc.existing);
        lp_.add_coefficient(r, j, 1.0);
        lp_.add_coefficient(r, tc.capacity, -avail);
        return j;
    }

    void technology(const Technology& tech)
    {
        const AnnualizedCost annual = annualize_technology(tech, sys_.costing);
        for (const auto& node : nodes_) {
            if (!tech.allowed_in(node)) {
                continue;
            }
            TechnologyColumns tc;
            tc.tech = tech.id;
            tc.region = node;
            tc.kind = tech.kind;
            tc.tech_class = tech.tech_class;
            tc.existing = tech.existing_in(node);
            const double room = tech.potential_in(node) - tc.existing;
            if (room > 0.0) {
                tc.capacity = column(label("cap", {tech.id, node}), room, annual.power / 1e6,
                                     {VariableKind::capacity, tech.id, node, -1, 0});
            }
            switch (tech.kind) {
            case TechKind::generation:
                generation(tech, tc);
                break;
            case TechKind::conversion:
                conversion(tech, tc);
                break;
            case TechKind::storage:
                tc.energy = column(label("ecap", {tech.id, node}), kUnbounded, annual.energy / 1e6,
                                   {VariableKind::storage_energy_capacity, tech.id, node, -1, 0});
                storage(tech, tc);
                break;
            }
            cat_.technologies.push_back(std::move(tc));
        }
    }

    void generation(const Technology& tech, TechnologyColumns& tc)
    {
        const std::string& c = tech.output_carrier;
        const int hours = m_.grid.resolution(c);
        tc.hours = hours;
        for (int b = 0; b < m_.grid.block_count(c); ++b) {
            const double avail = availability(tech, tc.region, m_.grid.steps_of(c, b));
            const int j = limited_column(label("gen", {tech.id, tc.region, std::to_string(b)}),
                                         {VariableKind::dispatch, tech.id, tc.region, b, hours}, tc, avail,
                                         variable_cost(tech, hours), "lim");
            lp_.add_coefficient(balance(c, tc.region, b), j, hours);
            tc.dispatch.push_back(j);
        }
    }

    void conversion(const Technology& tech, TechnologyColumns& tc)
    {
        const std::string& in = tech.input_carrier;
        const std::string& out = tech.output_carrier;
        const int r_in = m_.grid.resolution(in);
        const int r_out = m_.grid.resolution(out);
        const int hours = std::min(r_in, r_out);
        if (std::max(r_in, r_out) % hours != 0) {
            throw Error("technology " + tech.id + ": resolutions of " + in + " and " + out + " do not nest");
        }
        const std::string& fine = r_in <= r_out ? in : out;
        tc.hours = hours;
        const bool output_basis = tech.capacity_basis == CapacityBasis::output;
        const double out_per_unit = output_basis ? 1.0 : tech.efficiency;
        const double in_per_unit = output_basis ? 1.0 / tech.efficiency : 1.0;
        for (int b = 0; b < m_.grid.block_count(fine); ++b) {
            const StepRange steps = m_.grid.steps_of(fine, b);
            const double avail = availability(tech, tc.region, steps);
            const int j = limited_column(label("gen", {tech.id, tc.region, std::to_string(b)}),
                                         {VariableKind::dispatch, tech.id, tc.region, b, hours}, tc, avail,
                                         variable_cost(tech, hours), "lim");
            lp_.add_coefficient(balance(out, tc.region, m_.grid.block_of(out, steps.first)), j,
                                hours * out_per_unit);
            lp_.add_coefficient(balance(in, tc.region, m_.grid.block_of(in, steps.first)), j,
                                -hours * in_per_unit);
            tc.dispatch.push_back(j);
        }
    }

    void storage(const Technology& tech, TechnologyColumns& tc)
    {
        const std::string& c = tech.output_carrier;
        const int hours = m_.grid.resolution(c);
        const int blocks = m_.grid.block_count(c);
        const double eta = std::sqrt(tech.efficiency);
        tc.hours = hours;
        for (int b = 0; b < blocks; ++b) {
            const std::string bs = std::to_string(b);
            const int chg = limited_column(label("chg", {tech.id, tc.region, bs}),
                                           {VariableKind::charge, tech.id, tc.region, b, hours}, tc, 1.0, 0.0,
                                           "chglim");
            const int dis = limited_column(label("dis", {tech.id, tc.region, bs}),
                                           {VariableKind::discharge, tech.id, tc.region, b, hours}, tc, 1.0,
                                           variable_cost(tech, hours), "dislim");
            const int lvl = column(label("lvl", {tech.id, tc.region, bs}), kUnbounded, 0.0,
                                   {VariableKind::storage_level, tech.id, tc.region, b, hours});
            const int cap_row = lp_.add_row(label("lvllim", {tech.id, tc.region, bs}), RowSense::less_equal, 0.0);
            lp_.add_coefficient(cap_row, lvl, 1.0);
            lp_.add_coefficient(cap_row, tc.energy, -1.0);
            const int bal = balance(c, tc.region, b);
            lp_.add_coefficient(bal, dis, hours);
            lp_.add_coefficient(bal, chg, -hours);
            tc.charge.push_back(chg);
            tc.dispatch.push_back(dis);
            tc.level.push_back(lvl);
        }
        // level(b) = level(b-1) + η·h·charge(b) − h·discharge(b)/η, cyclic in b.
        for (int b = 0; b < blocks; ++b) {
            const auto bb = static_cast<std::size_t>(b);
            const auto prev = static_cast<std::size_t>((b + blocks - 1) % blocks);
            const int r = lp_.add_row(label("sto", {tech.id, tc.region, std::to_string(b)}), RowSense::equal, 0.0);
            lp_.add_coefficient(r, tc.level[bb], 1.0);
            lp_.add_coefficient(r, tc.level[prev], -1.0);
            lp_.add_coefficient(r, tc.charge[bb], -eta * hours);
            lp_.add_coefficient(r, tc.dispatch[bb], hours / eta);
        }
    }

    void transmission(const TransmissionLine& line)
    {
        const Carrier* carrier = sys_.find_carrier(line.carrier);
        LineColumns lc;
        lc.line = line.id;
        lc.electric = carrier->kind == CarrierKind::electricity;
        const std::string country = sys_.country_of(line.from);
        lc.intra_country = country == sys_.country_of(line.to);
        lc.stays_in_focus = lc.intra_country && sys_.is_container(country);
        lc.length_km = line.length_km;
        lc.existing = line.existing_capacity;
        lc.derating = line.derating;
        const int hours = m_.grid.resolution(line.carrier);
        lc.hours = hours;
        if (line.expansion_cost) {
            lc.expansion_cost = *line.expansion_cost / 1e6;
        } else {
            const double fraction =
                carrier->kind == CarrierKind::hydrogen ? sys_.costing.h2_pipeline_cost_fraction : 1.0;
            lc.expansion_cost = line_expansion_cost(line.length_km, sys_.costing) * fraction / 1e6;
        }
        if (line.expandable && std::isfinite(line.existing_capacity)) {
            lc.expansion = column(label("exp", {line.id}), kUnbounded, lc.expansion_cost,
                                  {VariableKind::line_expansion, line.id, "", -1, 0});
        }
        const double bound = line.derating * line.existing_capacity;
        const double received = 1.0 - line.losses;
        for (int b = 0; b < m_.grid.block_count(line.carrier); ++b) {
            const std::string bs = std::to_string(b);
            const bool limited = lc.expansion >= 0;
            const int fwd = column(label("flow+", {line.id, bs}), limited ? kUnbounded : bound, 0.0,
                                   {VariableKind::flow_forward, line.id, "", b, hours});
            const int bwd = column(label("flow-", {line.id, bs}), limited ? kUnbounded : bound, 0.0,
                                   {VariableKind::flow_backward, line.id, "", b, hours});
            if (limited) {
                for (auto [col, prefix, rows] : {std::tuple{fwd, "flowlim+", &lc.limit_forward},
                                                 std::tuple{bwd, "flowlim-", &lc.limit_backward}}) {
                    const int r = lp_.add_row(label(prefix, {line.id, bs}), RowSense::less_equal, bound);
                    lp_.add_coefficient(r, col, 1.0);
                    lp_.add_coefficient(r, lc.expansion, -line.derating);
                    rows->push_back(r);
                }
            }
            const int at_from = balance(line.carrier, line.from, b);
            const int at_to = balance(line.carrier, line.to, b);
            lp_.add_coefficient(at_from, fwd, -hours);
            lp_.add_coefficient(at_to, fwd, hours * received);
            lp_.add_coefficient(at_to, bwd, -hours);
            lp_.add_coefficient(at_from, bwd, hours * received);
            lc.forward.push_back(fwd);
            lc.backward.push_back(bwd);
        }
        cat_.lines.push_back(std::move(lc));
    }

    void demand_rows(const DemandSpec& d)
    {
        std::vector<double> shape;
        if (d.profile_id.empty()) {
            shape.assign(static_cast<std::size_t>(horizon_), 1.0 / horizon_);
        } else {
            const Profile* p = sys_.resolve_profile(d.profile_id, d.region);
            if (p == nullptr) {
                throw Error("demand " + d.id + ": profile '" + d.profile_id + "' not found");
            }
            shape = p->values;
        }
        std::vector<double> gwh = expand_to_series(d.annual_energy_twh, shape, horizon_);
        for (double& v : gwh) {
            v /= 1e3;
        }
        const int res = m_.grid.resolution(d.carrier);
        const int flex = d.flexibility_block_hours;
        auto energy = [&](int first, int last) {
            double sum = 0.0;
            for (int t = first; t < last; ++t) {
                sum += gwh[static_cast<std::size_t>(t)];
            }
            return sum;
        };
        auto& fixed = cat_.fixed_demand.at(d.carrier).at(d.region);
        if (flex <= res) {
            for (int b = 0; b < m_.grid.block_count(d.carrier); ++b) {
                const StepRange s = m_.grid.steps_of(d.carrier, b);
                const double e = energy(s.first, s.last);
                fixed[static_cast<std::size_t>(b)] += e;
                lp_.row(balance(d.carrier, d.region, b)).rhs += e;
            }
            return;
        }
        if (flex % res != 0 || horizon_ % flex != 0) {
            throw Error("demand " + d.id + ": flexibility block does not nest with the carrier resolution");
        }
        const int per_block = flex / res;
        auto& slices = cat_.demand_slices[d.id];
        for (int k = 0; k < horizon_ / flex; ++k) {
            const double e = energy(k * flex, (k + 1) * flex);
            const double cap = sys_.defaults.demand_peak_multiple * (e / flex) * res;
            const int row = lp_.add_row(label("flex", {d.id, std::to_string(k)}), RowSense::equal, e);
            for (int i = 0; i < per_block; ++i) {
                const int b = k * per_block + i;
                const int j = column(label("slice", {d.id, std::to_string(b)}), cap, 0.0,
                                     {VariableKind::demand_slice, d.id, d.region, b, res});
                lp_.add_coefficient(row, j, 1.0);
                lp_.add_coefficient(balance(d.carrier, d.region, b), j, -1.0);
                slices.push_back(j);
            }
        }
    }

    BuiltModel& m_;
    const EnergySystem& sys_;
    LpProblem& lp_;
    VariableCatalog& cat_;
    int horizon_ = 0;
    std::vector<std::string> nodes_;
};

std::unordered_map<std::string, int> name_index(const LpProblem& problem)
{
    std::unordered_map<std::string, int> out;
    out.reserve(static_cast<std::size_t>(problem.num_columns()));
    for (int j = 0; j < problem.num_columns(); ++j) {
        out.emplace(problem.column(j).name, j);
    }
    return out;
}

void offshore_row(LpProblem& lp, const BuiltModel& model, double target_gw, const std::string& name)
{
    double existing = 0.0;
    std::vector<int> cols;
    for (const auto& tc : model.catalog.technologies) {
        if (tc.tech_class != "wind_offshore") {
            continue;
        }
        existing += tc.existing;
        if (tc.capacity >= 0) {
            cols.push_back(tc.capacity);
        }
    }
    if (target_gw < existing - 1e-9) {
        throw Error(name + ": target " + std::to_string(target_gw) + " GW below existing offshore capacity");
    }
    const int r = lp.add_row(name, RowSense::equal, target_gw - existing);
    for (int j : cols) {
        lp.add_coefficient(r, j, 1.0);
    }
}

} // namespace

TimeGrid grid_for(const EnergySystem& system)
{
    std::map<std::string, int> res;
    for (const auto& c : system.carriers) {
        res[c.id] = c.resolution_hours;
    }
    return TimeGrid::build(system.horizon_hours, res);
}

EnergySystem prepare_system(const EnergySystem& system, const ScenarioConfig& scenario)
{
    EnergySystem out = split_wake_blocks(system);
    if (scenario.demand == DemandVariant::eff) {
        for (auto& d : out.demands) {
            d.annual_energy_twh *= out.defaults.eff_demand_factor;
        }
    }
    return out;
}

BuiltModel build(const EnergySystem& system, const ScenarioConfig& scenario, const TimeGrid& grid)
{
    const auto violations = validate(system);
    if (!violations.empty()) {
        std::string msg = "system is not valid:";
        for (std::size_t i = 0; i < violations.size() && i < 8; ++i) {
            msg += "\n  " + violations[i].entity + ": " + violations[i].rule;
        }
        if (violations.size() > 8) {
            msg += "\n  ... " + std::to_string(violations.size() - 8) + " more";
        }
        throw Error(msg);
    }
    if (grid.horizon_hours() != system.horizon_hours) {
        throw Error("time grid horizon does not match the system horizon");
    }
    for (const auto& c : system.carriers) {
        if (grid.resolution(c.id) != c.resolution_hours) {
            throw Error("time grid resolution of " + c.id + " does not match the system");
        }
    }
    BuiltModel model{prepare_system(system, scenario), grid, {}, {}, 8760.0 / system.horizon_hours};
    Assembler(model).run();
    return model;
}

LpProblem apply_scenario_overlay(const LpProblem& problem, const BuiltModel& model,
                                 const std::vector<Overlay>& overlays)
{
    int structural = 0;
    for (const auto& o : overlays) {
        structural += o.kind != Overlay::Kind::integrated ? 1 : 0;
    }
    if (structural > 1) {
        throw Error("conflicting scenario overlays: only one overlay may be applied");
    }
    LpProblem lp = problem;
    for (const auto& o : overlays) {
        switch (o.kind) {
        case Overlay::Kind::integrated:
            break;
        case Overlay::Kind::disintegrated_phase_a:
            for (const auto& lc : model.catalog.lines) {
                if (!lc.electric || !lc.intra_country) {
                    continue;
                }
                if (lc.expansion >= 0) {
                    lp.column(lc.expansion).cost = 0.0;
                    lp.column(lc.expansion).upper = kUnbounded;
                } else {
                    for (int j : lc.forward) {
                        lp.column(j).upper = kUnbounded;
                    }
                    for (int j : lc.backward) {
                        lp.column(j).upper = kUnbounded;
                    }
                }
            }
            break;
        case Overlay::Kind::disintegrated_phase_b:
            fix_columns(lp, o.fixed, FixMode::equal);
            break;
        case Overlay::Kind::decentral:
            for (const auto& lc : model.catalog.lines) {
                if (lc.expansion >= 0) {
                    lp.column(lc.expansion).upper = 0.0;
                }
            }
            break;
        case Overlay::Kind::central:
            for (const auto& lc : model.catalog.lines) {
                if (lc.expansion >= 0) {
                    lp.column(lc.expansion).upper = kUnbounded;
                }
            }
            offshore_row(lp, model, o.value, "central_offshore");
            break;
        case Overlay::Kind::offshore_fix:
            offshore_row(lp, model, o.value, "offshore_fix");
            break;
        case Overlay::Kind::grid_cap: {
            if (!(o.value >= 0.0)) {
                throw Error("grid_cap: fraction must be >= 0");
            }
            double today = 0.0;
            std::vector<std::pair<int, double>> terms;
            for (const auto& lc : model.catalog.lines) {
                if (lc.electric && lc.expansion >= 0) {
                    today += lc.existing * lc.length_km;
                    terms.emplace_back(lc.expansion, lc.length_km);
                }
            }
            // GW·km, scaled to TW·km so coefficients stay near unity.
            const int r = lp.add_row("grid_cap", RowSense::less_equal, o.value * today / 1e3);
            for (auto [j, len] : terms) {
                lp.add_coefficient(r, j, len / 1e3);
            }
            break;
        }
        }
    }
    return lp;
}

void fix_columns(LpProblem& problem, const std::map<std::string, double>& values, FixMode mode, double band)
{
    const auto index = name_index(problem);
    for (const auto& [name, raw] : values) {
        auto it = index.find(name);
        if (it == index.end()) {
            throw Error("cannot fix unknown column '" + name + "'");
        }
        auto& c = problem.column(it->second);
        const double v = std::clamp(raw, c.lower, c.upper);
        switch (mode) {
        case FixMode::equal:
            // The recorded value itself, so fixed columns reproduce it bit for bit.
            c.lower = raw;
            c.upper = raw;
            break;
        case FixMode::at_least:
            c.lower = v;
            break;
        case FixMode::deviation: {
            const double lo = std::max(c.lower, v * (1.0 - band));
            const double up = std::min(c.upper, v * (1.0 + band));
            c.lower = lo;
            c.upper = std::max(lo, up);
            break;
        }
        }
    }
}

std::map<std::string, double> investment_values(const BuiltModel& model, const LpSolution& solution,
                                                bool include_lines)
{
    std::map<std::string, double> out;
    auto put = [&](int j) {
        if (j >= 0) {
            out[model.problem.column(j).name] = solution.primal.at(static_cast<std::size_t>(j));
        }
    };
    for (const auto& tc : model.catalog.technologies) {
        put(tc.capacity);
        put(tc.energy);
    }
    if (include_lines) {
        for (const auto& lc : model.catalog.lines) {
            put(lc.expansion);
        }
    }
    return out;
}

} // namespace enplan
