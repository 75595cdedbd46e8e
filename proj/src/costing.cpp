#include "enplan/costing.hpp"

#include "enplan/error.hpp"
#include "enplan/system.hpp"

#include <cmath>

namespace enplan {

double annuity_factor(double rate, double lifetime_years)
{
    if (!(lifetime_years >= 1.0)) {
        throw Error("annuity_factor: lifetime must be at least one year");
    }
    if (!(rate >= 0.0)) {
        throw Error("annuity_factor: interest rate must be non-negative");
    }
    if (rate == 0.0) {
        return 1.0 / lifetime_years;
    }
    // -expm1(-n log1p(r)) == 1 - (1+r)^-n without cancellation for small r.
    return rate / -std::expm1(-lifetime_years * std::log1p(rate));
}

AnnualizedCost annualize_technology(const Technology& tech, const CostingConfig& cfg)
{
    const double af = annuity_factor(cfg.interest_rate, tech.lifetime);
    constexpr double kPerKwToPerGw = 1e6;
    AnnualizedCost out;
    out.power = (tech.overnight_cost_power * af + tech.fixed_om) * kPerKwToPerGw;
    if (tech.kind == TechKind::storage) {
        out.energy = tech.overnight_cost_energy * af * kPerKwToPerGw;
    }
    return out;
}

double line_expansion_cost(double length_km, const CostingConfig& cfg)
{
    if (!(length_km > 0.0)) {
        throw Error("line_expansion_cost: length must be positive");
    }
    return length_km * cfg.grid_unit_cost * annuity_factor(cfg.interest_rate, cfg.grid_lifetime);
}

double grid_unit_cost_from_line(double cost_per_km, double line_capacity_gw)
{
    if (!(line_capacity_gw > 0.0)) {
        throw Error("grid_unit_cost_from_line: capacity must be positive");
    }
    return cost_per_km / line_capacity_gw;
}

} // namespace enplan
