#include "enplan/system.hpp"

#include "enplan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace enplan {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::pair<Enum, std::string_view> (&table)[N],
                std::string_view what)
{
    for (const auto& [value, name] : table) {
        if (name == text) {
            return value;
        }
    }
    throw Error("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::pair<Enum, std::string_view> (&table)[N])
{
    for (const auto& [v, name] : table) {
        if (v == value) {
            return name;
        }
    }
    return "?";
}

constexpr std::pair<CarrierKind, std::string_view> kCarrierKinds[] = {
    {CarrierKind::electricity, "electricity"},
    {CarrierKind::hydrogen, "hydrogen"},
    {CarrierKind::methane, "methane"},
    {CarrierKind::heat, "heat"},
    {CarrierKind::transport_service, "transport-service"},
};
constexpr std::pair<RegionLevel, std::string_view> kRegionLevels[] = {
    {RegionLevel::country, "country"},
    {RegionLevel::subregion, "subregion"},
};
constexpr std::pair<TechKind, std::string_view> kTechKinds[] = {
    {TechKind::generation, "generation"},
    {TechKind::storage, "storage"},
    {TechKind::conversion, "conversion"},
};
constexpr std::pair<CapacityBasis, std::string_view> kBases[] = {
    {CapacityBasis::output, "output"},
    {CapacityBasis::input, "input"},
};
constexpr std::pair<LandClass, std::string_view> kLandClasses[] = {
    {LandClass::urban, "urban"},
    {LandClass::suburban, "suburban"},
    {LandClass::agricultural, "agricultural"},
    {LandClass::forested, "forested"},
};

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id)
{
    for (const auto& item : items) {
        if (item.id == id) {
            return &item;
        }
    }
    return nullptr;
}

bool has_whitespace(std::string_view id)
{
    return id.find_first_of(" \t\r\n,") != std::string_view::npos;
}

} // namespace

std::string_view to_string(CarrierKind kind) { return name_of(kind, kCarrierKinds); }
std::string_view to_string(RegionLevel level) { return name_of(level, kRegionLevels); }
std::string_view to_string(TechKind kind) { return name_of(kind, kTechKinds); }
std::string_view to_string(CapacityBasis basis) { return name_of(basis, kBases); }
std::string_view to_string(LandClass cls) { return name_of(cls, kLandClasses); }
CarrierKind parse_carrier_kind(std::string_view text)
{
    return parse_enum(text, kCarrierKinds, "carrier kind");
}
RegionLevel parse_region_level(std::string_view text)
{
    return parse_enum(text, kRegionLevels, "region level");
}
TechKind parse_tech_kind(std::string_view text)
{
    return parse_enum(text, kTechKinds, "technology kind");
}
CapacityBasis parse_capacity_basis(std::string_view text)
{
    return parse_enum(text, kBases, "capacity basis");
}
LandClass parse_land_class(std::string_view text)
{
    return parse_enum(text, kLandClasses, "land class");
}

double LandUse::area(LandClass cls) const
{
    switch (cls) {
    case LandClass::urban:
        return urban;
    case LandClass::suburban:
        return suburban;
    case LandClass::agricultural:
        return agricultural;
    case LandClass::forested:
        return forested;
    }
    return 0.0;
}

double Technology::existing_in(const std::string& region) const
{
    auto it = existing_capacity.find(region);
    return it == existing_capacity.end() ? 0.0 : it->second;
}

double Technology::potential_in(const std::string& region) const
{
    if (potential.empty()) {
        return kUnbounded;
    }
    auto it = potential.find(region);
    return it == potential.end() ? 0.0 : it->second;
}

bool Technology::allowed_in(const std::string& region) const
{
    return potential_in(region) > 0.0 || existing_in(region) > 0.0;
}

const Carrier* EnergySystem::find_carrier(std::string_view id) const
{
    return find_by_id(carriers, id);
}
const Region* EnergySystem::find_region(std::string_view id) const
{
    return find_by_id(regions, id);
}
const Technology* EnergySystem::find_technology(std::string_view id) const
{
    return find_by_id(technologies, id);
}
const TransmissionLine* EnergySystem::find_line(std::string_view id) const
{
    return find_by_id(lines, id);
}

bool EnergySystem::is_container(std::string_view region_id) const
{
    return std::any_of(regions.begin(), regions.end(),
                       [&](const Region& r) { return r.parent == region_id; });
}

std::vector<std::string> EnergySystem::nodes() const
{
    std::vector<std::string> out;
    for (const auto& r : regions) {
        if (!is_container(r.id)) {
            out.push_back(r.id);
        }
    }
    return out;
}

std::string EnergySystem::country_of(std::string_view region_id) const
{
    const Region* r = find_region(region_id);
    if (r != nullptr && !r->parent.empty()) {
        return r->parent;
    }
    return std::string(region_id);
}

const Profile* EnergySystem::resolve_profile(std::string_view profile_id,
                                             std::string_view region) const
{
    std::string key = std::string(profile_id);
    key += '@';
    key += region;
    if (auto it = profiles.find(key); it != profiles.end()) {
        return &it->second;
    }
    if (auto it = profiles.find(std::string(profile_id)); it != profiles.end()) {
        return &it->second;
    }
    return nullptr;
}

std::vector<Violation> validate(const EnergySystem& system)
{
    std::vector<Violation> out;
    auto add = [&](std::string entity, std::string rule) {
        out.push_back({std::move(entity), std::move(rule)});
    };

    if (system.horizon_hours < 1) {
        add("system", "horizon_hours must be at least 1");
    }
    if (!(system.costing.interest_rate >= 0.0)) {
        add("system", "interest_rate must be non-negative");
    }
    if (!(system.costing.grid_unit_cost > 0.0)) {
        add("system", "grid_unit_cost must be positive");
    }
    if (!(system.costing.grid_lifetime > 0.0)) {
        add("system", "grid_lifetime must be positive");
    }
    if (!(system.defaults.derating > 0.0 && system.defaults.derating <= 1.0)) {
        add("system", "default derating must lie in (0,1]");
    }
    if (!(system.defaults.wake_factor > 0.0 && system.defaults.wake_factor <= 1.0)) {
        add("system", "default wake_factor must lie in (0,1]");
    }
    if (!(system.defaults.demand_peak_multiple >= 1.0)) {
        add("system", "demand_peak_multiple must be at least 1");
    }

    auto check_unique = [&](const auto& items, std::string_view what) {
        std::set<std::string> seen;
        for (const auto& item : items) {
            if (item.id.empty() || has_whitespace(item.id)) {
                add(std::string(what) + " '" + item.id + "'",
                    "id must be non-empty without whitespace or commas");
            }
            if (!seen.insert(item.id).second) {
                add(std::string(what) + " " + item.id, "duplicate id");
            }
        }
    };
    check_unique(system.carriers, "carrier");
    check_unique(system.regions, "region");
    check_unique(system.technologies, "technology");
    check_unique(system.lines, "line");
    check_unique(system.demands, "demand");

    int finest = 0;
    for (const auto& c : system.carriers) {
        if (c.resolution_hours >= 1 && (finest == 0 || c.resolution_hours < finest)) {
            finest = c.resolution_hours;
        }
    }
    for (const auto& c : system.carriers) {
        const std::string entity = "carrier " + c.id;
        if (c.resolution_hours < 1) {
            add(entity, "resolution_hours must be a positive integer");
            continue;
        }
        if (system.horizon_hours >= 1 && system.horizon_hours % c.resolution_hours != 0) {
            add(entity, "resolution_hours must divide the horizon");
        }
        if (finest > 0 && c.resolution_hours % finest != 0) {
            add(entity, "resolution_hours must be a multiple of the finest resolution");
        }
    }

    for (const auto& r : system.regions) {
        const std::string entity = "region " + r.id;
        if (r.level == RegionLevel::subregion) {
            const Region* parent = system.find_region(r.parent);
            if (r.parent.empty() || parent == nullptr) {
                add(entity, "subregion must reference an existing parent");
            } else if (parent->level != RegionLevel::country) {
                add(entity, "parent must be a country");
            }
        } else if (!r.parent.empty()) {
            add(entity, "countries have no parent");
        }
        if (!(r.population >= 0.0)) {
            add(entity, "population must be non-negative");
        }
        if (!(r.gdp >= 0.0)) {
            add(entity, "gdp must be non-negative");
        }
        for (auto cls : {LandClass::urban, LandClass::suburban, LandClass::agricultural,
                         LandClass::forested}) {
            if (!(r.land.area(cls) >= 0.0)) {
                add(entity, "land area '" + std::string(to_string(cls)) + "' must be non-negative");
            }
        }
    }

    auto is_node = [&](const std::string& id) {
        return system.find_region(id) != nullptr && !system.is_container(id);
    };

    for (const auto& t : system.technologies) {
        const std::string entity = "technology " + t.id;
        if (system.find_carrier(t.output_carrier) == nullptr) {
            add(entity, "output_carrier '" + t.output_carrier + "' does not exist");
        }
        if (t.kind == TechKind::conversion) {
            if (system.find_carrier(t.input_carrier) == nullptr) {
                add(entity, "conversion input_carrier '" + t.input_carrier + "' does not exist");
            } else if (t.input_carrier == t.output_carrier) {
                add(entity, "conversion must change carrier");
            }
        } else if (!t.input_carrier.empty() && t.input_carrier != t.output_carrier) {
            add(entity, "only conversion technologies take a distinct input_carrier");
        }
        if (!(t.efficiency > 0.0 && t.efficiency <= 1.0)) {
            add(entity, "efficiency must lie in (0,1]");
        }
        if (!(t.lifetime > 0.0)) {
            add(entity, "lifetime must be positive");
        }
        if (!(t.overnight_cost_power >= 0.0) || !(t.overnight_cost_energy >= 0.0) ||
            !(t.fixed_om >= 0.0) || !(t.variable_om >= 0.0)) {
            add(entity, "cost fields must be non-negative");
        }
        if (t.kind != TechKind::storage && t.overnight_cost_energy != 0.0) {
            add(entity, "only storage carries an energy cost");
        }
        if (!(t.availability_scale > 0.0 && t.availability_scale <= 1.0)) {
            add(entity, "availability_scale must lie in (0,1]");
        }
        if (t.kind == TechKind::generation && !t.availability_profile.empty()) {
            if (t.potential.empty()) {
                add(entity, "generation with an availability profile needs potential bounds");
            }
        }
        if (!t.availability_profile.empty()) {
            for (const auto& [region, _] : t.potential) {
                if (system.resolve_profile(t.availability_profile, region) == nullptr) {
                    add(entity, "availability profile '" + t.availability_profile +
                                    "' not found for region " + region);
                }
            }
        }
        for (const auto& [region, value] : t.potential) {
            if (!is_node(region)) {
                add(entity, "potential references unknown node '" + region + "'");
            }
            if (!(value >= 0.0)) {
                add(entity, "potential must be non-negative");
            }
        }
        for (const auto& [region, value] : t.existing_capacity) {
            if (!is_node(region)) {
                add(entity, "existing capacity references unknown node '" + region + "'");
            }
            if (!(value >= 0.0)) {
                add(entity, "existing capacity must be non-negative");
            }
        }
        if (t.wake) {
            if (!(t.wake->threshold_gw >= 0.0)) {
                add(entity, "wake threshold must be non-negative");
            }
            if (!(t.wake->factor > 0.0 && t.wake->factor <= 1.0)) {
                add(entity, "wake factor must lie in (0,1]");
            }
            if (system.find_technology(t.id + "_wake") != nullptr) {
                add(entity, "id '" + t.id + "_wake' is reserved for the wake block");
            }
        }
    }

    for (const auto& l : system.lines) {
        const std::string entity = "line " + l.id;
        if (l.from == l.to) {
            add(entity, "from and to must differ");
        }
        if (!is_node(l.from) || !is_node(l.to)) {
            add(entity, "endpoints must be existing nodes");
        }
        if (system.find_carrier(l.carrier) == nullptr) {
            add(entity, "carrier '" + l.carrier + "' does not exist");
        }
        if (!(l.derating > 0.0 && l.derating <= 1.0)) {
            add(entity, "derating must lie in (0,1]");
        }
        if (!(l.length_km > 0.0)) {
            add(entity, "length_km must be positive");
        }
        if (!(l.existing_capacity >= 0.0)) {
            add(entity, "existing capacity must be non-negative");
        }
        if (!(l.losses >= 0.0 && l.losses < 1.0)) {
            add(entity, "losses must lie in [0,1)");
        }
        if (l.expansion_cost && !l.expandable) {
            add(entity, "expansion cost given for a non-expandable line");
        }
        if (l.expansion_cost && !(*l.expansion_cost >= 0.0)) {
            add(entity, "expansion cost must be non-negative");
        }
    }

    for (const auto& d : system.demands) {
        const std::string entity = "demand " + d.id;
        const Carrier* carrier = system.find_carrier(d.carrier);
        if (carrier == nullptr) {
            add(entity, "carrier '" + d.carrier + "' does not exist");
        }
        if (!is_node(d.region)) {
            add(entity, "region '" + d.region + "' is not a node");
        }
        if (!(d.annual_energy_twh >= 0.0)) {
            add(entity, "annual_energy must be non-negative");
        }
        if (d.flexibility_block_hours < 1) {
            add(entity, "flexibility_block_hours must be a positive integer");
        } else if (carrier != nullptr && carrier->resolution_hours >= 1) {
            const int a = d.flexibility_block_hours;
            const int b = carrier->resolution_hours;
            if (a % b != 0 && b % a != 0) {
                add(entity, "flexibility block and carrier resolution must nest");
            }
            if (system.horizon_hours >= 1 && system.horizon_hours % a != 0) {
                add(entity, "flexibility block must divide the horizon");
            }
        }
        if (!d.profile_id.empty()) {
            const Profile* profile = system.resolve_profile(d.profile_id, d.region);
            if (profile == nullptr) {
                add(entity, "profile '" + d.profile_id + "' not found");
            } else if (profile->normalization != Normalization::sums_to_one) {
                add(entity, "profile '" + d.profile_id + "' must be normalized to sum to one");
            }
        }

        if (carrier != nullptr) {
            bool supplied = false;
            for (const auto& t : system.technologies) {
                if (t.kind != TechKind::storage && t.output_carrier == d.carrier &&
                    t.allowed_in(d.region)) {
                    supplied = true;
                    break;
                }
            }
            for (const auto& l : system.lines) {
                if (supplied) {
                    break;
                }
                if (l.carrier == d.carrier && (l.from == d.region || l.to == d.region)) {
                    supplied = true;
                }
            }
            if (!supplied) {
                add(entity, "no producing or importing pathway for carrier " + d.carrier);
            }
        }
    }

    for (const auto& [key, p] : system.profiles) {
        const std::string entity = "profile " + key;
        if (static_cast<int>(p.values.size()) != system.horizon_hours) {
            add(entity, "length must equal the horizon");
        }
        if (p.normalization == Normalization::sums_to_one) {
            double sum = 0.0;
            bool negative = false;
            for (double v : p.values) {
                sum += v;
                negative = negative || v < 0.0;
            }
            if (std::fabs(sum - 1.0) > 1e-9 || negative) {
                add(entity, "sums-to-one profile must be non-negative and sum to 1");
            }
        } else {
            for (double v : p.values) {
                if (!(v >= 0.0 && v <= 1.0)) {
                    add(entity, "capacity factors must lie in [0,1]");
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<CapacityBlock> offshore_blocks(double potential, double wake_threshold,
                                           double wake_factor)
{
    if (!(potential >= 0.0) || !(wake_threshold >= 0.0)) {
        throw Error("offshore_blocks: potential and threshold must be non-negative");
    }
    if (!(wake_factor > 0.0 && wake_factor <= 1.0)) {
        throw Error("offshore_blocks: wake factor must lie in (0,1]");
    }
    std::vector<CapacityBlock> blocks;
    blocks.push_back({std::min(potential, wake_threshold), 1.0});
    const double beyond = std::max(0.0, potential - wake_threshold);
    if (beyond > 0.0) {
        blocks.push_back({beyond, wake_factor});
    }
    return blocks;
}

EnergySystem split_wake_blocks(const EnergySystem& system)
{
    EnergySystem out = system;
    out.technologies.clear();
    for (const auto& tech : system.technologies) {
        if (!tech.wake || tech.potential.empty()) {
            out.technologies.push_back(tech);
            continue;
        }
        double national = 0.0;
        for (const auto& [_, p] : tech.potential) {
            national += p;
        }
        Technology base = tech;
        Technology beyond = tech;
        base.wake.reset();
        beyond.wake.reset();
        beyond.id = tech.id + "_wake";
        beyond.availability_scale = tech.availability_scale * tech.wake->factor;
        beyond.potential.clear();
        beyond.existing_capacity.clear();
        bool any_beyond = false;
        for (const auto& [region, p] : tech.potential) {
            const double share = national > 0.0 ? p / national : 0.0;
            const auto blocks = offshore_blocks(p, tech.wake->threshold_gw * share, tech.wake->factor);
            base.potential[region] = blocks[0].capacity_gw;
            const double existing = tech.existing_in(region);
            const double in_base = std::min(existing, blocks[0].capacity_gw);
            if (existing > 0.0) {
                base.existing_capacity[region] = in_base;
            }
            if (blocks.size() > 1) {
                beyond.potential[region] = blocks[1].capacity_gw;
                if (existing > in_base) {
                    beyond.existing_capacity[region] = existing - in_base;
                }
                any_beyond = true;
            }
        }
        out.technologies.push_back(std::move(base));
        if (any_beyond) {
            out.technologies.push_back(std::move(beyond));
        }
    }
    return out;
}

} // namespace enplan
