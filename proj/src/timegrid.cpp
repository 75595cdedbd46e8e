#include "enplan/timegrid.hpp"

#include "enplan/error.hpp"

namespace enplan {

TimeGrid TimeGrid::build(int horizon_hours, const std::map<std::string, int>& carrier_resolutions)
{
    if (horizon_hours < 1) {
        throw Error("TimeGrid: horizon must be at least one hour");
    }
    TimeGrid grid;
    grid.horizon_ = horizon_hours;
    for (const auto& [carrier, res] : carrier_resolutions) {
        if (res < 1) {
            throw Error("TimeGrid: resolution of '" + carrier + "' must be a positive integer");
        }
        if (horizon_hours % res != 0) {
            throw Error("TimeGrid: resolution " + std::to_string(res) + "h of '" + carrier +
                        "' does not divide the " + std::to_string(horizon_hours) + "h horizon");
        }
        grid.resolutions_.emplace(carrier, res);
    }
    return grid;
}

int TimeGrid::resolution(std::string_view carrier) const
{
    auto it = resolutions_.find(carrier);
    if (it == resolutions_.end()) {
        throw Error("TimeGrid: unknown carrier '" + std::string(carrier) + "'");
    }
    return it->second;
}

int TimeGrid::block_count(std::string_view carrier) const
{
    return horizon_ / resolution(carrier);
}

int TimeGrid::block_of(std::string_view carrier, int timestep) const
{
    const int res = resolution(carrier);
    if (timestep < 0 || timestep >= horizon_) {
        throw Error("TimeGrid: timestep " + std::to_string(timestep) + " outside [0, " +
                    std::to_string(horizon_) + ")");
    }
    return timestep / res;
}

StepRange TimeGrid::steps_of(std::string_view carrier, int block) const
{
    const int res = resolution(carrier);
    if (block < 0 || block >= horizon_ / res) {
        throw Error("TimeGrid: block " + std::to_string(block) + " out of range for '" +
                    std::string(carrier) + "'");
    }
    return {block * res, (block + 1) * res};
}

} // namespace enplan
