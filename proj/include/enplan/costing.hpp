#pragma once

namespace enplan {

struct Technology;

struct CostingConfig {
    double interest_rate = 0.02;
    double grid_unit_cost = 2.74e6; ///< €/km/GW
    double grid_lifetime = 60.0;    ///< years
    /// Hydrogen pipeline upgrade cost as a fraction of an electricity line of equal length.
    double h2_pipeline_cost_fraction = 0.1;

    bool operator==(const CostingConfig&) const = default;
};

/// Annualised investment of one technology, unit-converted to GW / GWh.
struct AnnualizedCost {
    double power = 0.0;  ///< €/GW/y
    double energy = 0.0; ///< €/GWh/y

    bool operator==(const AnnualizedCost&) const = default;
};

/// Capital recovery factor r / (1 - (1+r)^-n); 1/n when r == 0.
double annuity_factor(double rate, double lifetime_years);

/// overnight × annuity + fixed O&M, in €/GW/y (power) and €/GWh/y (energy).
AnnualizedCost annualize_technology(const Technology& tech, const CostingConfig& cfg);

/// Annualised expansion cost of a line of `length_km`, €/GW/y.
double line_expansion_cost(double length_km, const CostingConfig& cfg);

/// Grid unit cost in €/km/GW implied by a per-km line cost and the line's capacity in GW.
double grid_unit_cost_from_line(double cost_per_km, double line_capacity_gw);

} // namespace enplan
