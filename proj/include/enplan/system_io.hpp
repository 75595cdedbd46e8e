#pragma once

#include "enplan/system.hpp"

#include <filesystem>

namespace enplan {

/// Loads a system directory: system.json manifest plus carriers.csv, regions.csv,
/// technologies.csv, lines.csv, demands.csv and the profile table the manifest names.
/// Unknown columns and manifest keys are rejected. Column schemas are listed in
/// docs/input_format.md.
EnergySystem load_system(const std::filesystem::path& dir);

/// Writes `system` in the format read by load_system. Numbers are written in
/// shortest round-trip form so that load_system(save_system(x)) == x.
void save_system(const EnergySystem& system, const std::filesystem::path& dir);

/// Parses "R1=10;R2=2.5" into a region map. Empty text yields an empty map.
std::map<std::string, double> parse_region_map(std::string_view text, const std::string& context);
std::string format_region_map(const std::map<std::string, double>& values);

} // namespace enplan
