#pragma once

#include <map>
#include <string>
#include <string_view>

namespace enplan {

/// Half-open range of base timesteps [first, last).
struct StepRange {
    int first = 0;
    int last = 0;
    int size() const { return last - first; }
    bool operator==(const StepRange&) const = default;
};

/// Maps hourly base timesteps onto contiguous, equal-length blocks per carrier.
///
/// Every configured resolution must divide the horizon, so blocks never run
/// ragged at the end.
class TimeGrid {
public:
    static TimeGrid build(int horizon_hours, const std::map<std::string, int>& carrier_resolutions);

    int horizon_hours() const { return horizon_; }
    int base_step_hours() const { return 1; }

    int resolution(std::string_view carrier) const;
    int block_count(std::string_view carrier) const;
    int block_of(std::string_view carrier, int timestep) const;
    StepRange steps_of(std::string_view carrier, int block) const;

    const std::map<std::string, int, std::less<>>& resolutions() const { return resolutions_; }

private:
    int horizon_ = 0;
    std::map<std::string, int, std::less<>> resolutions_;
};

} // namespace enplan
