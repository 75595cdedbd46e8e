#pragma once

#include "enplan/system.hpp"

#include <cstdint>

namespace enplan {

struct DeskOptions {
    int horizon_hours = 168;
    int electricity_resolution = 3;
    int hydrogen_resolution = 24;
    std::uint32_t seed = 2040;
};

/// Synthetic single-country instance: a north coast with offshore wind and
/// strong onshore wind, a sunny demand-heavy south, and two interior regions.
/// Electricity and hydrogen carriers, costs of the 2040 technology set.
EnergySystem desk_instance(const DeskOptions& options = {});

/// Continental view of the two-stage toy: countries A and B plus the focus
/// country F as single nodes.
EnergySystem toy_continental(int horizon_hours = 24);
/// Regional view: A and B unchanged, F split into subregions F1 and F2.
EnergySystem toy_regional(int horizon_hours = 24);

/// Small random single-country system with two or three subregions, used for
/// integrated-versus-disintegrated comparisons.
EnergySystem random_system(std::uint32_t seed, int horizon_hours = 24);

} // namespace enplan
