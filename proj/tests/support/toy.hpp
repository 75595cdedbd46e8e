#pragma once

#include "enplan/system.hpp"

#include <string>
#include <vector>

namespace toy {

/// Capacity cost of `meur` M€/GW/y: zero interest, one-year life.
inline enplan::Technology generator(const std::string& id, const std::string& carrier, double meur)
{
    enplan::Technology t;
    t.id = id;
    t.kind = enplan::TechKind::generation;
    t.tech_class = id;
    t.output_carrier = carrier;
    t.overnight_cost_power = meur; // 1 €/kW = 1 M€/GW
    t.lifetime = 1.0;
    return t;
}

inline enplan::Technology storage(const std::string& id, const std::string& carrier, double power_meur,
                                  double energy_meur, double round_trip)
{
    enplan::Technology t;
    t.id = id;
    t.kind = enplan::TechKind::storage;
    t.tech_class = "battery";
    t.output_carrier = carrier;
    t.overnight_cost_power = power_meur;
    t.overnight_cost_energy = energy_meur;
    t.lifetime = 1.0;
    t.efficiency = round_trip;
    return t;
}

inline enplan::Region region(const std::string& id, const std::string& parent = {})
{
    enplan::Region r;
    r.id = id;
    r.level = parent.empty() ? enplan::RegionLevel::country : enplan::RegionLevel::subregion;
    r.parent = parent;
    r.population = 1.0;
    r.gdp = 1.0;
    return r;
}

/// Flat demand of `gw` over the horizon.
inline enplan::DemandSpec flat_demand(const std::string& id, const std::string& carrier,
                                      const std::string& region, double gw, int horizon, int flex = 1)
{
    enplan::DemandSpec d;
    d.id = id;
    d.carrier = carrier;
    d.region = region;
    // GWh over the horizon, scaled to a year, in TWh.
    d.annual_energy_twh = gw * 8760.0 / 1e3;
    d.flexibility_block_hours = flex;
    (void)horizon;
    return d;
}

/// One region, one electricity carrier, zero interest.
inline enplan::EnergySystem single_node(int horizon)
{
    enplan::EnergySystem s;
    s.horizon_hours = horizon;
    s.costing.interest_rate = 0.0;
    s.carriers.push_back({"elec", enplan::CarrierKind::electricity, 1});
    s.regions.push_back(region("A"));
    return s;
}

inline enplan::Profile profile(const std::string& id, std::vector<double> values,
                               enplan::Normalization norm = enplan::Normalization::capacity_factor)
{
    return {id, std::move(values), norm};
}

} // namespace toy
