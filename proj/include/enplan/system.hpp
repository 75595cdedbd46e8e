#pragma once

#include "enplan/costing.hpp"

#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enplan {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class CarrierKind { electricity, hydrogen, methane, heat, transport_service };
enum class RegionLevel { country, subregion };
enum class TechKind { generation, storage, conversion };
/// Which side of a conversion process its capacity (and dispatch) is measured on.
enum class CapacityBasis { output, input };
enum class LandClass { urban, suburban, agricultural, forested };
enum class Normalization { sums_to_one, capacity_factor };

std::string_view to_string(CarrierKind kind);
std::string_view to_string(RegionLevel level);
std::string_view to_string(TechKind kind);
std::string_view to_string(CapacityBasis basis);
std::string_view to_string(LandClass cls);
CarrierKind parse_carrier_kind(std::string_view text);
RegionLevel parse_region_level(std::string_view text);
TechKind parse_tech_kind(std::string_view text);
CapacityBasis parse_capacity_basis(std::string_view text);
LandClass parse_land_class(std::string_view text);

struct Carrier {
    std::string id;
    CarrierKind kind = CarrierKind::electricity;
    int resolution_hours = 1;

    bool operator==(const Carrier&) const = default;
};

/// Land area per class in km².
struct LandUse {
    double urban = 0.0;
    double suburban = 0.0;
    double agricultural = 0.0;
    double forested = 0.0;

    double area(LandClass cls) const;
    bool operator==(const LandUse&) const = default;
};

struct Region {
    std::string id;
    RegionLevel level = RegionLevel::country;
    std::string parent; ///< empty for countries
    double population = 0.0;
    double gdp = 0.0;
    LandUse land;

    bool operator==(const Region&) const = default;
};

/// Per-unit wake penalty applied beyond a national offshore threshold.
struct WakeSpec {
    double threshold_gw = 0.0;
    double factor = 1.0;

    bool operator==(const WakeSpec&) const = default;
};

struct Technology {
    std::string id;
    TechKind kind = TechKind::generation;
    /// Reporting class, e.g. "pv" groups rooftop and open-space PV.
    std::string tech_class;
    std::string input_carrier; ///< conversion only; empty otherwise
    std::string output_carrier;
    CapacityBasis capacity_basis = CapacityBasis::output;
    double overnight_cost_power = 0.0;  ///< €/kW
    double overnight_cost_energy = 0.0; ///< €/kWh, storage only
    double fixed_om = 0.0;              ///< €/kW/y
    double variable_om = 0.0;           ///< €/MWh
    double lifetime = 1.0;              ///< years
    /// Conversion: output/input. Storage: round trip, split evenly into charge and discharge.
    double efficiency = 1.0;
    std::string availability_profile; ///< empty means always available
    double availability_scale = 1.0;
    std::map<std::string, double> potential;         ///< region → GW, total installed bound
    std::map<std::string, double> existing_capacity; ///< region → GW
    std::optional<WakeSpec> wake;

    double existing_in(const std::string& region) const;
    /// Upper bound on total installed capacity in `region`; kUnbounded when no potential map.
    double potential_in(const std::string& region) const;
    /// Whether the technology may operate in `region` at all.
    bool allowed_in(const std::string& region) const;

    bool operator==(const Technology&) const = default;
};

struct TransmissionLine {
    std::string id;
    std::string carrier;
    std::string from;
    std::string to;
    double length_km = 0.0;
    double existing_capacity = 0.0; ///< GW; kUnbounded for uncongested pipelines
    double derating = 1.0;
    bool expandable = false;
    std::optional<double> expansion_cost; ///< €/GW/y override; derived from length otherwise
    double losses = 0.0;

    bool operator==(const TransmissionLine&) const = default;
};

struct DemandSpec {
    std::string id;
    std::string carrier;
    std::string region;
    double annual_energy_twh = 0.0;
    std::string profile_id;
    int flexibility_block_hours = 1;

    bool operator==(const DemandSpec&) const = default;
};

struct Profile {
    std::string id;
    std::vector<double> values;
    Normalization normalization = Normalization::capacity_factor;

    bool operator==(const Profile&) const = default;
};

/// Model-wide defaults that are not attached to a single entity.
struct ModelDefaults {
    double derating = 0.7;
    double wake_factor = 0.85;
    double demand_peak_multiple = 3.0;
    double default_lifetime = 30.0;
    double eff_demand_factor = 610.0 / 1209.0;
    /// Offshore target of the central scenario, GW.
    double central_offshore_gw = 50.0;

    bool operator==(const ModelDefaults&) const = default;
};

struct EnergySystem {
    std::vector<Carrier> carriers;
    std::vector<Region> regions;
    std::vector<Technology> technologies;
    std::vector<TransmissionLine> lines;
    std::vector<DemandSpec> demands;
    std::map<std::string, Profile> profiles;
    int horizon_hours = 8760;
    CostingConfig costing;
    ModelDefaults defaults;
    /// Assumptions the input relied on (e.g. defaulted lifetimes); carried into reports.
    std::vector<std::string> assumption_flags;

    double interest_rate() const { return costing.interest_rate; }

    const Carrier* find_carrier(std::string_view id) const;
    const Region* find_region(std::string_view id) const;
    const Technology* find_technology(std::string_view id) const;
    const TransmissionLine* find_line(std::string_view id) const;

    /// Regions that have subregions act as containers and carry no balance of their own.
    bool is_container(std::string_view region_id) const;
    /// Regions that take part in the energy balance, in declaration order.
    std::vector<std::string> nodes() const;
    /// Country a node belongs to: its parent for subregions, itself otherwise.
    std::string country_of(std::string_view region_id) const;

    /// Looks up `profile_id@region` first, then `profile_id`.
    const Profile* resolve_profile(std::string_view profile_id, std::string_view region) const;

    bool operator==(const EnergySystem&) const = default;
};

struct Violation {
    std::string entity; ///< e.g. "line L1"
    std::string rule;

    bool operator==(const Violation&) const = default;
};

/// Checks every structural invariant; an empty result means the system is well formed.
std::vector<Violation> validate(const EnergySystem& system);

/// Capacity block of a wake-split offshore potential.
struct CapacityBlock {
    double capacity_gw = 0.0;
    double availability_scale = 1.0;

    bool operator==(const CapacityBlock&) const = default;
};

/// Splits an offshore potential into an unpenalised block up to `wake_threshold`
/// and a block beyond it whose availability is scaled by `wake_factor`.
std::vector<CapacityBlock> offshore_blocks(double potential, double wake_threshold,
                                           double wake_factor);

/// Replaces every technology that carries a WakeSpec by its two capacity blocks.
/// The national threshold is shared among regions in proportion to their potential;
/// the penalised block becomes technology `<id>_wake` with the same class.
EnergySystem split_wake_blocks(const EnergySystem& system);

} // namespace enplan
