#include "enplan/pipeline.hpp"

#include "enplan/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace enplan {

double LandShares::eligible_area(const LandUse& land) const
{
    return urban * land.urban + suburban * land.suburban + agricultural * land.agricultural +
           forested * land.forested;
}

LandShares default_land_shares(std::string_view tech_class)
{
    LandShares shares;
    if (tech_class == "pv_rooftop") {
        shares.urban = 1.0;
        shares.suburban = 1.0;
    } else if (tech_class == "pv_open" || tech_class == "wind_onshore") {
        shares.agricultural = 1.0;
        shares.forested = 1.0;
    }
    return shares;
}

std::map<std::string, double> allocate_potential(double national_gw,
                                                 const std::vector<Region>& regions,
                                                 const LandShares& shares)
{
    if (!(national_gw >= 0.0)) {
        throw Error("allocate_potential: national potential must be non-negative");
    }
    if (!(shares.urban >= 0.0 && shares.suburban >= 0.0 && shares.agricultural >= 0.0 &&
          shares.forested >= 0.0)) {
        throw Error("allocate_potential: land shares must be non-negative");
    }
    double total = 0.0;
    for (const auto& r : regions) {
        total += shares.eligible_area(r.land);
    }
    if (!(total > 0.0)) {
        throw Error("allocate_potential: no region has eligible area");
    }
    std::map<std::string, double> out;
    for (const auto& r : regions) {
        out[r.id] = national_gw * (shares.eligible_area(r.land) / total);
    }
    return out;
}

std::vector<std::vector<double>> scale_cluster_profiles(std::span<const double> base,
                                                        std::span<const double> quality_weights,
                                                        std::span<const double> capacity_shares)
{
    if (quality_weights.empty()) {
        throw Error("scale_cluster_profiles: at least one cluster required");
    }
    for (double v : base) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error("scale_cluster_profiles: base must be a capacity-factor profile");
        }
    }
    for (double w : quality_weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error("scale_cluster_profiles: weights must be positive");
        }
    }
    const std::size_t clusters = quality_weights.size();
    std::vector<double> shares(clusters, 1.0 / static_cast<double>(clusters));
    if (!capacity_shares.empty()) {
        if (capacity_shares.size() != clusters) {
            throw Error("scale_cluster_profiles: one capacity share per cluster required");
        }
        const double sum = std::accumulate(capacity_shares.begin(), capacity_shares.end(), 0.0);
        for (std::size_t c = 0; c < clusters; ++c) {
            if (!(capacity_shares[c] > 0.0) || !(sum > 0.0)) {
                throw Error("scale_cluster_profiles: capacity shares must be positive");
            }
            shares[c] = capacity_shares[c] / sum;
        }
    }
    double mean_weight = 0.0;
    for (std::size_t c = 0; c < clusters; ++c) {
        mean_weight += shares[c] * quality_weights[c];
    }
    const double base_energy = std::accumulate(base.begin(), base.end(), 0.0);

    std::vector<std::vector<double>> out(clusters);
    for (std::size_t c = 0; c < clusters; ++c) {
        const double weight = quality_weights[c] / mean_weight;
        const double target = weight * base_energy;
        if (target > static_cast<double>(base.size()) * (1.0 + 1e-12)) {
            throw Error("scale_cluster_profiles: cluster " + std::to_string(c) +
                        " needs more energy than full output in every hour");
        }
        auto& profile = out[c];
        profile.resize(base.size());
        for (std::size_t t = 0; t < base.size(); ++t) {
            profile[t] = std::min(1.0, base[t] * weight);
        }
        // Each pass either meets the target or saturates at least one more hour.
        for (std::size_t pass = 0; pass <= base.size(); ++pass) {
            const double energy = std::accumulate(profile.begin(), profile.end(), 0.0);
            const double deficit = target - energy;
            if (std::fabs(deficit) <= 1e-12 * std::max(1.0, target)) {
                break;
            }
            std::size_t free = 0;
            for (double v : profile) {
                free += v < 1.0 ? 1 : 0;
            }
            if (free == 0) {
                throw Error("scale_cluster_profiles: clipping cannot be rebalanced");
            }
            const double lift = deficit / static_cast<double>(free);
            for (double& v : profile) {
                if (v < 1.0) {
                    v = std::min(1.0, v + lift);
                }
            }
        }
    }
    return out;
}

std::map<std::string, double> disaggregate_demand(double national_twh,
                                                  const std::vector<Region>& regions,
                                                  DemandWeights weights)
{
    if (!(weights.population_share >= 0.0 && weights.gdp_share >= 0.0) ||
        std::fabs(weights.population_share + weights.gdp_share - 1.0) > 1e-12) {
        throw Error("disaggregate_demand: population and gdp shares must be non-negative and sum to 1");
    }
    double total_pop = 0.0;
    double total_gdp = 0.0;
    for (const auto& r : regions) {
        if (!(r.population >= 0.0 && r.gdp >= 0.0)) {
            throw Error("disaggregate_demand: population and gdp must be non-negative");
        }
        total_pop += r.population;
        total_gdp += r.gdp;
    }
    if ((weights.population_share > 0.0 && !(total_pop > 0.0)) ||
        (weights.gdp_share > 0.0 && !(total_gdp > 0.0))) {
        throw Error("disaggregate_demand: a weighted indicator has zero total");
    }
    std::map<std::string, double> out;
    for (const auto& r : regions) {
        double share = 0.0;
        if (weights.population_share > 0.0) {
            share += weights.population_share * r.population / total_pop;
        }
        if (weights.gdp_share > 0.0) {
            share += weights.gdp_share * r.gdp / total_gdp;
        }
        out[r.id] = national_twh * share;
    }
    return out;
}

std::vector<double> expand_to_series(double annual_twh, std::span<const double> profile,
                                     int horizon_hours)
{
    if (horizon_hours < 1 || static_cast<int>(profile.size()) != horizon_hours) {
        throw Error("expand_to_series: profile length " + std::to_string(profile.size()) +
                    " does not match horizon " + std::to_string(horizon_hours));
    }
    const double horizon_mwh = annual_twh * 1e6 * (static_cast<double>(horizon_hours) / 8760.0);
    std::vector<double> out(profile.size());
    for (std::size_t t = 0; t < profile.size(); ++t) {
        out[t] = horizon_mwh * profile[t];
    }
    return out;
}

} // namespace enplan
