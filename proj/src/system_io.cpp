#include "enplan/system_io.hpp"

#include "enplan/csv.hpp"
#include "enplan/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace enplan {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::vector<std::string> kCarrierColumns = {"id", "kind", "resolution_hours"};
const std::vector<std::string> kRegionColumns = {
    "id",       "level",        "parent",           "population",
    "gdp",      "urban_km2",    "suburban_km2",     "agricultural_km2",
    "forested_km2"};
const std::vector<std::string> kTechColumns = {
    "id",           "kind",
    "class",        "input_carrier",
    "output_carrier", "capacity_basis",
    "overnight_cost_power", "overnight_cost_energy",
    "fixed_om",     "variable_om",
    "lifetime",     "efficiency",
    "availability_profile", "availability_scale",
    "potential",    "existing_capacity",
    "wake_threshold", "wake_factor"};
const std::vector<std::string> kLineColumns = {
    "id",       "carrier",  "from",           "to",  "length_km", "existing_capacity",
    "derating", "expandable", "expansion_cost", "losses"};
const std::vector<std::string> kDemandColumns = {
    "id", "carrier", "region", "annual_twh", "profile", "flexibility_block_hours"};

const std::set<std::string> kManifestKeys = {
    "horizon_hours", "interest_rate",        "grid_unit_cost",
    "grid_lifetime", "h2_pipeline_cost_fraction", "defaults",
    "profiles",      "assumption_flags"};
const std::set<std::string> kDefaultsKeys = {
    "derating", "wake_factor", "demand_peak_multiple", "default_lifetime", "eff_demand_factor",
    "central_offshore_gw"};

bool parse_bool(const std::string& text, const std::string& context)
{
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text.empty() || text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw Error(context + ": not a boolean: '" + text + "'");
}

int parse_int(const csv::Table& table, std::size_t row, const std::string& column)
{
    const double value = table.number(row, column);
    if (value != static_cast<double>(static_cast<int>(value))) {
        throw Error(table.source() + ":" + std::to_string(table.line_of(row)) + " column " +
                    column + ": expected an integer");
    }
    return static_cast<int>(value);
}

std::string context_of(const csv::Table& table, std::size_t row)
{
    return table.source() + ":" + std::to_string(table.line_of(row));
}

void open_for_write(std::ofstream& out, const fs::path& path)
{
    out.open(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
}

std::string num(double value) { return csv::format_exact(value); }

} // namespace

std::map<std::string, double> parse_region_map(std::string_view text, const std::string& context)
{
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view item = text.substr(pos, end - pos);
        pos = end + 1;
        if (item.empty()) {
            continue;
        }
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw Error(context + ": expected region=value, got '" + std::string(item) + "'");
        }
        std::string key(item.substr(0, eq));
        if (out.count(key) != 0) {
            throw Error(context + ": region '" + key + "' listed twice");
        }
        out[key] = csv::parse_double(item.substr(eq + 1), context);
    }
    return out;
}

std::string format_region_map(const std::map<std::string, double>& values)
{
    std::string out;
    for (const auto& [region, value] : values) {
        if (!out.empty()) {
            out += ';';
        }
        out += region + "=" + num(value);
    }
    return out;
}

EnergySystem load_system(const fs::path& dir)
{
    EnergySystem sys;

    const fs::path manifest_path = dir / "system.json";
    std::ifstream manifest_in(manifest_path);
    if (!manifest_in) {
        throw Error("cannot open " + manifest_path.string());
    }
    json manifest;
    try {
        manifest = json::parse(manifest_in);
    } catch (const json::exception& e) {
        throw Error(manifest_path.string() + ": " + e.what());
    }
    if (!manifest.is_object()) {
        throw Error(manifest_path.string() + ": manifest must be a JSON object");
    }
    for (const auto& [key, _] : manifest.items()) {
        if (kManifestKeys.count(key) == 0) {
            throw Error(manifest_path.string() + ": unknown key '" + key + "'");
        }
    }
    std::string profiles_file = "profiles.csv";
    try {
        sys.horizon_hours = manifest.at("horizon_hours").get<int>();
        sys.costing.interest_rate = manifest.value("interest_rate", sys.costing.interest_rate);
        sys.costing.grid_unit_cost = manifest.value("grid_unit_cost", sys.costing.grid_unit_cost);
        sys.costing.grid_lifetime = manifest.value("grid_lifetime", sys.costing.grid_lifetime);
        sys.costing.h2_pipeline_cost_fraction =
            manifest.value("h2_pipeline_cost_fraction", sys.costing.h2_pipeline_cost_fraction);
        if (manifest.contains("defaults")) {
            const auto& d = manifest.at("defaults");
            for (const auto& [key, _] : d.items()) {
                if (kDefaultsKeys.count(key) == 0) {
                    throw Error(manifest_path.string() + ": unknown defaults key '" + key + "'");
                }
            }
            sys.defaults.derating = d.value("derating", sys.defaults.derating);
            sys.defaults.wake_factor = d.value("wake_factor", sys.defaults.wake_factor);
            sys.defaults.demand_peak_multiple =
                d.value("demand_peak_multiple", sys.defaults.demand_peak_multiple);
            sys.defaults.default_lifetime = d.value("default_lifetime", sys.defaults.default_lifetime);
            sys.defaults.eff_demand_factor =
                d.value("eff_demand_factor", sys.defaults.eff_demand_factor);
            sys.defaults.central_offshore_gw =
                d.value("central_offshore_gw", sys.defaults.central_offshore_gw);
        }
        profiles_file = manifest.value("profiles", profiles_file);
        if (manifest.contains("assumption_flags")) {
            sys.assumption_flags = manifest.at("assumption_flags").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        throw Error(manifest_path.string() + ": " + e.what());
    }

    {
        auto t = csv::Table::read(dir / "carriers.csv");
        t.require_columns(kCarrierColumns, kCarrierColumns);
        for (std::size_t r = 0; r < t.rows(); ++r) {
            Carrier c;
            c.id = t.get(r, "id");
            c.kind = parse_carrier_kind(t.get(r, "kind"));
            c.resolution_hours = parse_int(t, r, "resolution_hours");
            sys.carriers.push_back(std::move(c));
        }
    }
    {
        auto t = csv::Table::read(dir / "regions.csv");
        t.require_columns({"id", "level"}, kRegionColumns);
        for (std::size_t r = 0; r < t.rows(); ++r) {
            Region g;
            g.id = t.get(r, "id");
            g.level = parse_region_level(t.get(r, "level"));
            g.parent = t.get(r, "parent");
            g.population = t.optional_number(r, "population").value_or(0.0);
            g.gdp = t.optional_number(r, "gdp").value_or(0.0);
            g.land.urban = t.optional_number(r, "urban_km2").value_or(0.0);
            g.land.suburban = t.optional_number(r, "suburban_km2").value_or(0.0);
            g.land.agricultural = t.optional_number(r, "agricultural_km2").value_or(0.0);
            g.land.forested = t.optional_number(r, "forested_km2").value_or(0.0);
            sys.regions.push_back(std::move(g));
        }
    }
    {
        auto t = csv::Table::read(dir / "technologies.csv");
        t.require_columns({"id", "kind", "output_carrier", "overnight_cost_power"}, kTechColumns);
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const std::string ctx = context_of(t, r);
            Technology tech;
            tech.id = t.get(r, "id");
            tech.kind = parse_tech_kind(t.get(r, "kind"));
            tech.tech_class = t.get(r, "class").empty() ? tech.id : t.get(r, "class");
            tech.input_carrier = t.get(r, "input_carrier");
            tech.output_carrier = t.get(r, "output_carrier");
            if (!t.get(r, "capacity_basis").empty()) {
                tech.capacity_basis = parse_capacity_basis(t.get(r, "capacity_basis"));
            }
            tech.overnight_cost_power = t.number(r, "overnight_cost_power");
            auto energy = t.optional_number(r, "overnight_cost_energy");
            if (tech.kind == TechKind::storage && !energy) {
                throw Error(ctx + ": storage technology '" + tech.id +
                            "' needs overnight_cost_energy");
            }
            tech.overnight_cost_energy = energy.value_or(0.0);
            tech.fixed_om = t.optional_number(r, "fixed_om").value_or(0.0);
            tech.variable_om = t.optional_number(r, "variable_om").value_or(0.0);
            if (auto lifetime = t.optional_number(r, "lifetime")) {
                tech.lifetime = *lifetime;
            } else {
                tech.lifetime = sys.defaults.default_lifetime;
                const std::string flag = "lifetime of " + tech.id + " defaulted to " +
                                         csv::format_exact(tech.lifetime) + " years";
                if (std::find(sys.assumption_flags.begin(), sys.assumption_flags.end(), flag) ==
                    sys.assumption_flags.end()) {
                    sys.assumption_flags.push_back(flag);
                }
            }
            tech.efficiency = t.optional_number(r, "efficiency").value_or(1.0);
            tech.availability_profile = t.get(r, "availability_profile");
            tech.availability_scale = t.optional_number(r, "availability_scale").value_or(1.0);
            tech.potential = parse_region_map(t.get(r, "potential"), ctx + " potential");
            tech.existing_capacity =
                parse_region_map(t.get(r, "existing_capacity"), ctx + " existing_capacity");
            if (auto threshold = t.optional_number(r, "wake_threshold")) {
                WakeSpec wake;
                wake.threshold_gw = *threshold;
                wake.factor = t.optional_number(r, "wake_factor").value_or(sys.defaults.wake_factor);
                tech.wake = wake;
            }
            sys.technologies.push_back(std::move(tech));
        }
    }
    {
        auto t = csv::Table::read(dir / "lines.csv");
        t.require_columns({"id", "carrier", "from", "to", "length_km"}, kLineColumns);
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const std::string ctx = context_of(t, r);
            TransmissionLine line;
            line.id = t.get(r, "id");
            line.carrier = t.get(r, "carrier");
            line.from = t.get(r, "from");
            line.to = t.get(r, "to");
            line.length_km = t.number(r, "length_km");
            line.existing_capacity = t.optional_number(r, "existing_capacity").value_or(kUnbounded);
            line.expandable = parse_bool(t.get(r, "expandable"), ctx + " expandable");
            line.expansion_cost = t.optional_number(r, "expansion_cost");
            line.losses = t.optional_number(r, "losses").value_or(0.0);
            if (auto derating = t.optional_number(r, "derating")) {
                line.derating = *derating;
            } else {
                const Carrier* carrier = sys.find_carrier(line.carrier);
                const bool electric = carrier != nullptr && carrier->kind == CarrierKind::electricity;
                const bool intra = sys.country_of(line.from) == sys.country_of(line.to);
                line.derating = electric && intra ? sys.defaults.derating : 1.0;
            }
            sys.lines.push_back(std::move(line));
        }
    }
    {
        auto t = csv::Table::read(dir / "demands.csv");
        t.require_columns({"id", "carrier", "region", "annual_twh", "profile"}, kDemandColumns);
        for (std::size_t r = 0; r < t.rows(); ++r) {
            DemandSpec d;
            d.id = t.get(r, "id");
            d.carrier = t.get(r, "carrier");
            d.region = t.get(r, "region");
            d.annual_energy_twh = t.number(r, "annual_twh");
            d.profile_id = t.get(r, "profile");
            d.flexibility_block_hours =
                t.get(r, "flexibility_block_hours").empty() ? 1 : parse_int(t, r, "flexibility_block_hours");
            sys.demands.push_back(std::move(d));
        }
    }
    if (fs::exists(dir / profiles_file)) {
        auto t = csv::Table::read(dir / profiles_file);
        for (const auto& name : t.header()) {
            Profile p;
            p.id = name;
            p.values.reserve(t.rows());
            for (std::size_t r = 0; r < t.rows(); ++r) {
                p.values.push_back(t.number(r, name));
            }
            sys.profiles.emplace(name, std::move(p));
        }
        for (const auto& d : sys.demands) {
            std::string key = d.profile_id + "@" + d.region;
            if (sys.profiles.count(key) == 0) {
                key = d.profile_id;
            }
            if (auto it = sys.profiles.find(key); it != sys.profiles.end()) {
                it->second.normalization = Normalization::sums_to_one;
            }
        }
    }
    return sys;
}

void save_system(const EnergySystem& sys, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create " + dir.string() + ": " + ec.message());
    }

    json manifest = json::object();
    manifest["horizon_hours"] = sys.horizon_hours;
    manifest["interest_rate"] = sys.costing.interest_rate;
    manifest["grid_unit_cost"] = sys.costing.grid_unit_cost;
    manifest["grid_lifetime"] = sys.costing.grid_lifetime;
    manifest["h2_pipeline_cost_fraction"] = sys.costing.h2_pipeline_cost_fraction;
    manifest["defaults"] = {
        {"derating", sys.defaults.derating},
        {"wake_factor", sys.defaults.wake_factor},
        {"demand_peak_multiple", sys.defaults.demand_peak_multiple},
        {"default_lifetime", sys.defaults.default_lifetime},
        {"eff_demand_factor", sys.defaults.eff_demand_factor},
        {"central_offshore_gw", sys.defaults.central_offshore_gw},
    };
    manifest["profiles"] = "profiles.csv";
    manifest["assumption_flags"] = sys.assumption_flags;
    {
        std::ofstream out;
        open_for_write(out, dir / "system.json");
        out << manifest.dump(2) << '\n';
    }

    std::ofstream out;
    open_for_write(out, dir / "carriers.csv");
    csv::write_record(out, kCarrierColumns);
    for (const auto& c : sys.carriers) {
        csv::write_record(out, {c.id, std::string(to_string(c.kind)), std::to_string(c.resolution_hours)});
    }
    out.close();

    open_for_write(out, dir / "regions.csv");
    csv::write_record(out, kRegionColumns);
    for (const auto& r : sys.regions) {
        csv::write_record(out, {r.id, std::string(to_string(r.level)), r.parent, num(r.population),
                                num(r.gdp), num(r.land.urban), num(r.land.suburban),
                                num(r.land.agricultural), num(r.land.forested)});
    }
    out.close();

    open_for_write(out, dir / "technologies.csv");
    csv::write_record(out, kTechColumns);
    for (const auto& t : sys.technologies) {
        csv::write_record(
            out, {t.id, std::string(to_string(t.kind)), t.tech_class, t.input_carrier,
                  t.output_carrier, std::string(to_string(t.capacity_basis)),
                  num(t.overnight_cost_power), num(t.overnight_cost_energy), num(t.fixed_om),
                  num(t.variable_om), num(t.lifetime), num(t.efficiency), t.availability_profile,
                  num(t.availability_scale), format_region_map(t.potential),
                  format_region_map(t.existing_capacity),
                  t.wake ? num(t.wake->threshold_gw) : std::string(),
                  t.wake ? num(t.wake->factor) : std::string()});
    }
    out.close();

    open_for_write(out, dir / "lines.csv");
    csv::write_record(out, kLineColumns);
    for (const auto& l : sys.lines) {
        csv::write_record(out, {l.id, l.carrier, l.from, l.to, num(l.length_km),
                                std::isinf(l.existing_capacity) ? std::string() : num(l.existing_capacity),
                                num(l.derating), l.expandable ? "true" : "false",
                                l.expansion_cost ? num(*l.expansion_cost) : std::string(),
                                num(l.losses)});
    }
    out.close();

    open_for_write(out, dir / "demands.csv");
    csv::write_record(out, kDemandColumns);
    for (const auto& d : sys.demands) {
        csv::write_record(out, {d.id, d.carrier, d.region, num(d.annual_energy_twh), d.profile_id,
                                std::to_string(d.flexibility_block_hours)});
    }
    out.close();

    fs::remove(dir / "profiles.csv", ec);
    if (sys.profiles.empty()) {
        return;
    }
    open_for_write(out, dir / "profiles.csv");
    std::vector<std::string> header;
    std::size_t length = 0;
    for (const auto& [key, p] : sys.profiles) {
        header.push_back(key);
        length = std::max(length, p.values.size());
    }
    csv::write_record(out, header);
    for (std::size_t i = 0; i < length; ++i) {
        std::vector<std::string> row;
        row.reserve(header.size());
        for (const auto& [key, p] : sys.profiles) {
            row.push_back(i < p.values.size() ? num(p.values[i]) : std::string());
        }
        csv::write_record(out, row);
    }
}

} // namespace enplan
