#include "enplan/scenario.hpp"

#include "enplan/csv.hpp"
#include "enplan/error.hpp"
#include "enplan/system.hpp"

#include <cmath>
#include <optional>
#include <set>

namespace enplan {

std::string_view to_string(OverlayKind kind)
{
    switch (kind) {
    case OverlayKind::integrated:
        return "integrated";
    case OverlayKind::disintegrated:
        return "disintegrated";
    case OverlayKind::central:
        return "central";
    case OverlayKind::decentral:
        return "decentral";
    case OverlayKind::grid_cap:
        return "grid_cap";
    case OverlayKind::offshore_fix:
        return "offshore_fix";
    }
    return "?";
}

std::string_view to_string(DemandVariant variant)
{
    return variant == DemandVariant::ref ? "REF" : "EFF";
}

std::string_view to_string(Stage stage)
{
    return stage == Stage::continental ? "continental" : "regional";
}

namespace {

std::optional<OverlayKind> overlay_named(std::string_view text)
{
    for (auto kind : {OverlayKind::integrated, OverlayKind::disintegrated, OverlayKind::central,
                      OverlayKind::decentral, OverlayKind::grid_cap, OverlayKind::offshore_fix}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

struct Builder {
    ScenarioConfig config;
    bool overlay_set = false;
    bool value_set = false;
    std::set<std::string> keys;

    void set_overlay(OverlayKind kind, std::optional<double> value, const std::string& origin)
    {
        // integrated is the neutral overlay and yields to any other; a bare overlay
        // name may be refined once by the same overlay with a value.
        const bool refines = kind == config.overlay && !value_set && value;
        const bool replaces_neutral = config.overlay == OverlayKind::integrated;
        if (overlay_set && !refines && !replaces_neutral) {
            throw Error("conflicting overlays: '" + std::string(to_string(config.overlay)) + "' and '" +
                        std::string(to_string(kind)) + "' (" + origin + ")");
        }
        const bool needs_value = kind == OverlayKind::grid_cap || kind == OverlayKind::offshore_fix;
        if (needs_value && !value) {
            throw Error("overlay '" + std::string(to_string(kind)) + "' needs a value (" + origin + ")");
        }
        if (!needs_value && kind != OverlayKind::central && value) {
            throw Error("overlay '" + std::string(to_string(kind)) + "' takes no value (" + origin + ")");
        }
        config.overlay = kind;
        if (value) {
            config.overlay_value = *value;
            value_set = true;
        }
        overlay_set = true;
    }

    void set_demand(std::string_view text, const std::string& origin)
    {
        if (!keys.insert("demand").second) {
            throw Error("demand variant given twice (" + origin + ")");
        }
        if (text == "REF" || text == "ref") {
            config.demand = DemandVariant::ref;
        } else if (text == "EFF" || text == "eff") {
            config.demand = DemandVariant::eff;
        } else {
            throw Error("unknown demand variant '" + std::string(text) + "' (" + origin + ")");
        }
    }
};

} // namespace

ScenarioConfig parse_scenario(std::string_view name, const std::vector<std::string>& overlays,
                              const EnergySystem& system)
{
    Builder b;
    b.config.name = std::string(name);
    b.config.overlay_value = system.defaults.central_offshore_gw;

    // Name tokens separated by '-' or '+': overlay names and REF/EFF.
    std::string token;
    auto flush_token = [&]() {
        if (token.empty()) {
            return;
        }
        if (token == "REF" || token == "EFF" || token == "ref" || token == "eff") {
            b.set_demand(token, "scenario name");
        } else if (auto kind = overlay_named(token)) {
            if (*kind == OverlayKind::grid_cap || *kind == OverlayKind::offshore_fix) {
                throw Error("scenario name token '" + token + "' needs a value; use --overlay " + token +
                            "=VALUE");
            }
            b.set_overlay(*kind, std::nullopt, "scenario name");
        } else {
            throw Error("unknown scenario name token '" + token + "'");
        }
        token.clear();
    };
    for (char ch : name) {
        if (ch == '-' || ch == '+') {
            flush_token();
        } else {
            token += ch;
        }
    }
    flush_token();

    for (const auto& item : overlays) {
        const auto eq = item.find('=');
        const std::string key = item.substr(0, eq);
        const std::string origin = "--overlay " + item;
        if (eq == std::string::npos) {
            auto kind = overlay_named(key);
            if (!kind) {
                throw Error("unknown overlay '" + key + "'");
            }
            b.set_overlay(*kind, std::nullopt, origin);
            continue;
        }
        const std::string value = item.substr(eq + 1);
        if (key == "demand") {
            b.set_demand(value, origin);
        } else if (key == "stage") {
            if (!b.keys.insert(key).second) {
                throw Error("stage given twice");
            }
            if (value == "continental") {
                b.config.stage = Stage::continental;
            } else if (value == "regional") {
                b.config.stage = Stage::regional;
            } else {
                throw Error("unknown stage '" + value + "'");
            }
        } else if (key == "foreign_deviation") {
            if (!b.keys.insert(key).second) {
                throw Error("foreign_deviation given twice");
            }
            b.config.foreign_deviation = csv::parse_double(value, origin);
        } else if (auto kind = overlay_named(key)) {
            b.set_overlay(*kind, csv::parse_double(value, origin), origin);
        } else {
            throw Error("unknown overlay key '" + key + "'");
        }
    }
    const auto errors = scenario_errors(b.config, system);
    if (!errors.empty()) {
        throw Error("scenario '" + b.config.name + "': " + errors.front());
    }
    return b.config;
}

std::vector<std::string> scenario_errors(const ScenarioConfig& config, const EnergySystem& system)
{
    std::vector<std::string> out;
    if (config.overlay == OverlayKind::grid_cap &&
        !(config.overlay_value >= 0.0 && std::isfinite(config.overlay_value))) {
        out.push_back("grid_cap fraction must be a finite value >= 0");
    }
    if (config.overlay == OverlayKind::central || config.overlay == OverlayKind::offshore_fix) {
        double potential = 0.0;
        double existing = 0.0;
        bool any = false;
        for (const auto& tech : system.technologies) {
            if (tech.tech_class != "wind_offshore") {
                continue;
            }
            any = true;
            for (const auto& node : system.nodes()) {
                potential += tech.potential_in(node);
                existing += tech.existing_in(node);
            }
        }
        if (!any) {
            out.push_back("offshore overlay but the system has no wind_offshore technology");
        } else if (!(config.overlay_value >= existing && config.overlay_value <= potential + 1e-9)) {
            out.push_back("offshore target " + csv::format_significant(config.overlay_value) +
                          " GW outside [existing " + csv::format_significant(existing) + ", potential " +
                          csv::format_significant(potential) + "] GW");
        }
    }
    if (!(config.foreign_deviation >= 0.0 && config.foreign_deviation < 1.0)) {
        out.push_back("foreign_deviation must lie in [0, 1)");
    }
    return out;
}

} // namespace enplan
