#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace enplan {

struct EnergySystem;

enum class OverlayKind { integrated, disintegrated, central, decentral, grid_cap, offshore_fix };
enum class DemandVariant { ref, eff };
enum class Stage { continental, regional };

std::string_view to_string(OverlayKind kind);
std::string_view to_string(DemandVariant variant);
std::string_view to_string(Stage stage);

/// One experiment: a constraint overlay on top of the base system.
struct ScenarioConfig {
    std::string name = "integrated";
    OverlayKind overlay = OverlayKind::integrated;
    /// GW for central / offshore_fix, fraction of today's grid for grid_cap.
    double overlay_value = 0.0;
    DemandVariant demand = DemandVariant::ref;
    Stage stage = Stage::regional;
    /// Two-stage only: relative band a fixed foreign investment may move within; 0 is strict.
    double foreign_deviation = 0.0;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Builds a scenario from a name such as "integrated", "decentral-EFF" or
/// "central" and `key=value` overlays (central=GW, offshore_fix=GW,
/// grid_cap=fraction, demand=REF|EFF, stage=continental|regional,
/// foreign_deviation=fraction, or a bare overlay name).
/// A second structural overlay, or a repeated key, is rejected.
/// `central` without a value takes the system's central offshore target.
ScenarioConfig parse_scenario(std::string_view name, const std::vector<std::string>& overlays,
                              const EnergySystem& system);

/// Invariant violations of `config` against `system`; empty when consistent.
std::vector<std::string> scenario_errors(const ScenarioConfig& config, const EnergySystem& system);

} // namespace enplan
