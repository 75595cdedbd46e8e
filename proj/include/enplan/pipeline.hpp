#pragma once

#include "enplan/system.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace enplan {

/// Fraction of each land class a technology may use.
struct LandShares {
    double urban = 0.0;
    double suburban = 0.0;
    double agricultural = 0.0;
    double forested = 0.0;

    double eligible_area(const LandUse& land) const;
    bool operator==(const LandShares&) const = default;
};

/// Default eligibility: rooftop PV on urban and sub-urban land; open-space PV
/// and onshore wind on agricultural and forested land. Unknown classes get none.
LandShares default_land_shares(std::string_view tech_class);

/// Splits a national potential over `regions` in proportion to eligible area.
std::map<std::string, double> allocate_potential(double national_gw,
                                                 const std::vector<Region>& regions,
                                                 const LandShares& shares);

/// Scales a capacity-factor profile by relative site quality.
///
/// Weights are normalised to a capacity-weighted mean of one, so the clusters
/// together carry the base energy. Each cluster is clipped at 1.0 and the clipped
/// energy is spread uniformly over its unclipped hours until the cluster's target
/// energy is met again. `capacity_shares` defaults to equal shares.
std::vector<std::vector<double>> scale_cluster_profiles(std::span<const double> base,
                                                        std::span<const double> quality_weights,
                                                        std::span<const double> capacity_shares = {});

struct DemandWeights {
    double population_share = 0.5;
    double gdp_share = 0.5;
};

/// region demand = national × (α·pop_i/Σpop + β·gdp_i/Σgdp).
std::map<std::string, double> disaggregate_demand(double national_twh,
                                                  const std::vector<Region>& regions,
                                                  DemandWeights weights = {});

/// Energy per hourly timestep (MWh) for an annual demand (TWh/y) shaped by a
/// sums-to-one profile; the series carries the horizon's share of the year.
std::vector<double> expand_to_series(double annual_twh, std::span<const double> profile,
                                     int horizon_hours);

} // namespace enplan
