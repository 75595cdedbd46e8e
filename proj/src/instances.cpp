#include "enplan/instances.hpp"

#include "enplan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace enplan {
namespace {

// Raw mt19937 output is fixed by the standard; distributions are not, so
// variates are derived from the bits directly to keep instances portable.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : gen_(seed) {}

    double uniform() { return (static_cast<double>(gen_()) + 0.5) / 4294967296.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

private:
    std::mt19937 gen_;
};

/// Nearest multiple of `quantum`; decimal quanta divide by an exact integer so
/// that the result prints in its short decimal form.
double round_to(double v, double quantum)
{
    if (quantum < 1.0) {
        const double inverse = std::round(1.0 / quantum);
        return std::round(v * inverse) / inverse;
    }
    return std::round(v / quantum) * quantum;
}

Region country(const std::string& id)
{
    Region r;
    r.id = id;
    r.level = RegionLevel::country;
    return r;
}

Region subregion(const std::string& id, const std::string& parent, double population, double gdp,
                 LandUse land)
{
    Region r;
    r.id = id;
    r.level = RegionLevel::subregion;
    r.parent = parent;
    r.population = population;
    r.gdp = gdp;
    r.land = land;
    return r;
}

Technology generation(const std::string& id, const std::string& cls, double overnight, double fom,
                      double lifetime, const std::string& profile)
{
    Technology t;
    t.id = id;
    t.kind = TechKind::generation;
    t.tech_class = cls;
    t.output_carrier = "elec";
    t.overnight_cost_power = overnight;
    t.fixed_om = fom;
    t.lifetime = lifetime;
    t.availability_profile = profile;
    return t;
}

Technology conversion(const std::string& id, const std::string& cls, const std::string& in,
                      const std::string& out, CapacityBasis basis, double eff, double overnight, double fom,
                      double lifetime)
{
    Technology t;
    t.id = id;
    t.kind = TechKind::conversion;
    t.tech_class = cls;
    t.input_carrier = in;
    t.output_carrier = out;
    t.capacity_basis = basis;
    t.efficiency = eff;
    t.overnight_cost_power = overnight;
    t.fixed_om = fom;
    t.lifetime = lifetime;
    return t;
}

Technology storage(const std::string& id, const std::string& cls, const std::string& carrier, double power,
                   double energy, double fom, double lifetime, double round_trip)
{
    Technology t;
    t.id = id;
    t.kind = TechKind::storage;
    t.tech_class = cls;
    t.output_carrier = carrier;
    t.overnight_cost_power = power;
    t.overnight_cost_energy = energy;
    t.fixed_om = fom;
    t.lifetime = lifetime;
    t.efficiency = round_trip;
    return t;
}

TransmissionLine line(const std::string& id, const std::string& carrier, const std::string& from,
                      const std::string& to, double km, double existing, double derating)
{
    TransmissionLine l;
    l.id = id;
    l.carrier = carrier;
    l.from = from;
    l.to = to;
    l.length_km = km;
    l.existing_capacity = existing;
    l.derating = derating;
    l.expandable = true;
    return l;
}

DemandSpec demand(const std::string& id, const std::string& carrier, const std::string& region, double twh,
                  const std::string& profile)
{
    DemandSpec d;
    d.id = id;
    d.carrier = carrier;
    d.region = region;
    d.annual_energy_twh = twh;
    d.profile_id = profile;
    d.flexibility_block_hours = 1;
    return d;
}

/// Clear-sky diurnal shape times a daily cloudiness draw.
std::vector<double> solar_series(Rng& rng, int hours, double peak)
{
    std::vector<double> out(static_cast<std::size_t>(hours), 0.0);
    double cloud = 1.0;
    for (int h = 0; h < hours; ++h) {
        if (h % 24 == 0) {
            cloud = rng.uniform(0.35, 1.0);
        }
        const double hod = h % 24 + 0.5;
        const double sun = hod > 6.0 && hod < 20.0 ? std::sin(std::numbers::pi * (hod - 6.0) / 14.0) : 0.0;
        out[static_cast<std::size_t>(h)] = peak * cloud * sun;
    }
    return out;
}

/// Weather process: a slow shared component plus a local one, mapped through
/// clipped onto [0, 1].
std::vector<double> wind_series(Rng& rng, std::span<const double> shared, double mean, double local_weight)
{
    std::vector<double> out(shared.size());
    double local = 0.0;
    for (std::size_t h = 0; h < shared.size(); ++h) {
        local = 0.95 * local + 0.3 * (rng.uniform() - 0.5);
        const double speed = (1.0 - local_weight) * shared[h] + local_weight * local;
        const double x = mean + 0.55 * speed;
        out[h] = std::clamp(x, 0.0, 1.0);
    }
    return out;
}

std::vector<double> weather(Rng& rng, int hours)
{
    std::vector<double> w(static_cast<std::size_t>(hours));
    double s = 0.0;
    double trend = 0.0;
    for (auto& v : w) {
        trend = 0.9 * trend + 0.1 * (rng.uniform() - 0.5);
        s = 0.97 * s + 0.25 * trend + 0.04 * (rng.uniform() - 0.5);
        v = s;
    }
    // Zero mean, unit amplitude.
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double amp = 0.0;
    for (auto& v : w) {
        v -= mean;
        amp = std::max(amp, std::abs(v));
    }
    if (amp > 0.0) {
        for (auto& v : w) {
            v /= amp;
        }
    }
    return w;
}

/// Daily and weekly load shape normalised to sum to one.
std::vector<double> load_shape(int hours, double daily_swing)
{
    std::vector<double> out(static_cast<std::size_t>(hours));
    for (int h = 0; h < hours; ++h) {
        const double hod = h % 24 + 0.5;
        const bool weekend = (h / 24) % 7 >= 5;
        const double day = 1.0 + daily_swing * std::sin(std::numbers::pi * (hod - 7.0) / 12.0);
        out[static_cast<std::size_t>(h)] = day * (weekend ? 0.9 : 1.0);
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& v : out) {
        v /= total;
    }
    return out;
}

std::vector<double> quantize(std::vector<double> v)
{
    for (auto& x : v) {
        x = std::clamp(round_to(x, 1e-4), 0.0, 1.0);
    }
    return v;
}

void add_profile(EnergySystem& sys, const std::string& id, std::vector<double> values, Normalization norm)
{
    sys.profiles[id] = Profile{id, std::move(values), norm};
}

} // namespace

EnergySystem desk_instance(const DeskOptions& options)
{
    const int H = options.horizon_hours;
    EnergySystem sys;
    sys.horizon_hours = H;
    sys.costing.interest_rate = 0.02;
    sys.carriers = {{"elec", CarrierKind::electricity, options.electricity_resolution},
                    {"h2", CarrierKind::hydrogen, options.hydrogen_resolution}};

    // Population in millions, GDP in bn €, land in km².
    sys.regions = {country("DE"),
                   subregion("N", "DE", 14.0, 450.0, {3000.0, 6000.0, 70000.0, 18000.0}),
                   subregion("E", "DE", 12.0, 350.0, {2500.0, 5000.0, 55000.0, 30000.0}),
                   subregion("W", "DE", 27.0, 1000.0, {6000.0, 11000.0, 35000.0, 22000.0}),
                   subregion("S", "DE", 30.0, 1300.0, {5000.0, 12000.0, 45000.0, 35000.0}),
                   subregion("O", "DE", 0.0, 0.0, {})};
    // Onshore subregions; the offshore hub O has no land, population or demand.
    const std::vector<Region> subs(sys.regions.begin() + 1, sys.regions.end() - 1);

    Rng rng(options.seed);

    // PV: one national shape, regional site quality via cluster scaling.
    const std::vector<double> sun = solar_series(rng, H, 0.4);
    const std::vector<double> pv_quality = {0.85, 0.95, 0.95, 1.2};
    const auto pv = scale_cluster_profiles(sun, pv_quality);
    std::vector<double> shared = weather(rng, H);
    // A calm spell from the middle of day three to the end of day four.
    for (int h = 0; h < H; ++h) {
        const double x = (h % 168 - 96.0) / 30.0;
        shared[static_cast<std::size_t>(h)] -= std::exp(-x * x);
    }
    const std::vector<double> onshore_mean = {0.40, 0.30, 0.27, 0.17};
    for (std::size_t i = 0; i < subs.size(); ++i) {
        add_profile(sys, "pv@" + subs[i].id, quantize(pv[i]), Normalization::capacity_factor);
        add_profile(sys, "onshore@" + subs[i].id, quantize(wind_series(rng, shared, onshore_mean[i], 0.3)),
                    Normalization::capacity_factor);
    }
    add_profile(sys, "offshore@O", quantize(wind_series(rng, shared, 0.55, 0.2)), Normalization::capacity_factor);
    add_profile(sys, "load", quantize(load_shape(H, 0.15)), Normalization::sums_to_one);
    // Re-normalise after rounding so the profile sums to one exactly enough.
    {
        auto& v = sys.profiles["load"].values;
        const double total = std::accumulate(v.begin(), v.end(), 0.0);
        for (auto& x : v) {
            x /= total;
        }
    }

    auto pv_open = generation("pv_open", "pv_open", 317.0, 6.34, 25.0, "pv");
    pv_open.potential = allocate_potential(226.0, subs, default_land_shares("pv_open"));
    auto pv_roof = generation("pv_rooftop", "pv_rooftop", 588.0, 8.14, 25.0, "pv");
    pv_roof.potential = allocate_potential(900.0, subs, default_land_shares("pv_rooftop"));
    auto onshore = generation("wind_onshore", "wind_onshore", 1140.0, 44.4, 25.0, "onshore");
    onshore.potential = allocate_potential(223.0, subs, default_land_shares("wind_onshore"));
    onshore.existing_capacity = {{"N", 20.0}, {"E", 14.0}, {"W", 8.0}, {"S", 4.0}};
    auto offshore = generation("wind_offshore", "wind_offshore", 2500.0, 50.0, 30.0, "offshore");
    offshore.potential = {{"O", 80.0}};
    offshore.existing_capacity = {{"O", 7.7}};
    offshore.wake = WakeSpec{50.0, sys.defaults.wake_factor};
    for (auto* t : {&pv_open, &pv_roof, &onshore}) {
        for (auto& [region, gw] : t->potential) {
            gw = round_to(gw, 0.01);
        }
    }

    sys.technologies = {
        pv_open,
        pv_roof,
        onshore,
        offshore,
        conversion("electrolyser", "electrolyser", "elec", "h2", CapacityBasis::input, 0.7, 418.0, 14.6, 30.0),
        conversion("h2_turbine", "h2_turbine", "h2", "elec", CapacityBasis::output, 0.4, 185.0, 3.3, 30.0),
        storage("battery", "battery", "elec", 74.7, 164.1, 1.1, 18.0, 0.9),
        storage("h2_storage", "h2_storage", "h2", 4.9, 0.00497, 0.0, 30.0, 0.95),
    };

    const double d = sys.defaults.derating;
    sys.lines = {
        line("O-N", "elec", "O", "N", 150.0, 11.0, d),
        line("N-W", "elec", "N", "W", 350.0, 7.0, d), line("N-E", "elec", "N", "E", 300.0, 5.6, d),
        line("N-S", "elec", "N", "S", 600.0, 2.8, d), line("E-S", "elec", "E", "S", 400.0, 5.6, d),
        line("W-S", "elec", "W", "S", 350.0, 7.0, d), line("E-W", "elec", "E", "W", 400.0, 4.2, d),
        line("H-N-W", "h2", "N", "W", 350.0, 0.0, 1.0), line("H-N-E", "h2", "N", "E", 300.0, 0.0, 1.0),
        line("H-W-S", "h2", "W", "S", 350.0, 0.0, 1.0), line("H-E-S", "h2", "E", "S", 400.0, 0.0, 1.0),
    };

    const auto elec = disaggregate_demand(550.0, subs);
    const auto h2 = disaggregate_demand(120.0, subs, {0.2, 0.8});
    for (const auto& r : subs) {
        sys.demands.push_back(demand("elec_" + r.id, "elec", r.id, round_to(elec.at(r.id), 0.01), "load"));
        sys.demands.push_back(demand("h2_" + r.id, "h2", r.id, round_to(h2.at(r.id), 0.01), ""));
    }
    for (auto& dm : sys.demands) {
        if (dm.carrier == "h2") {
            dm.flexibility_block_hours = options.hydrogen_resolution;
        }
    }
    sys.defaults.central_offshore_gw = 50.0;
    return sys;
}

namespace {

EnergySystem toy_base(int horizon_hours)
{
    EnergySystem sys;
    sys.horizon_hours = horizon_hours;
    sys.costing.interest_rate = 0.02;
    sys.carriers = {{"elec", CarrierKind::electricity, 1}};
    Rng rng(7);
    const std::vector<double> sun = solar_series(rng, horizon_hours, 0.8);
    const std::vector<double> shared = weather(rng, horizon_hours);
    add_profile(sys, "pv", quantize(sun), Normalization::capacity_factor);
    add_profile(sys, "wind", quantize(wind_series(rng, shared, 0.35, 0.3)), Normalization::capacity_factor);
    add_profile(sys, "load", std::vector<double>(static_cast<std::size_t>(horizon_hours),
                                                 1.0 / static_cast<double>(horizon_hours)),
                Normalization::sums_to_one);
    return sys;
}

} // namespace

EnergySystem toy_continental(int horizon_hours)
{
    EnergySystem sys = toy_base(horizon_hours);
    sys.regions = {country("A"), country("B"), country("F")};
    auto pv = generation("pv", "pv", 317.0, 6.34, 25.0, "pv");
    pv.potential = {{"A", 40.0}, {"B", 10.0}, {"F", 30.0}};
    auto wind = generation("wind", "wind_onshore", 1140.0, 44.4, 25.0, "wind");
    wind.potential = {{"A", 10.0}, {"B", 40.0}, {"F", 20.0}};
    sys.technologies = {pv, wind, storage("battery", "battery", "elec", 74.7, 164.1, 1.1, 18.0, 0.9)};
    sys.lines = {line("A-B", "elec", "A", "B", 500.0, 2.0, 0.7), line("A-F", "elec", "A", "F", 400.0, 2.0, 0.7),
                 line("B-F", "elec", "B", "F", 400.0, 2.0, 0.7)};
    sys.demands = {demand("dA", "elec", "A", 40.0, "load"), demand("dB", "elec", "B", 40.0, "load"),
                   demand("dF", "elec", "F", 60.0, "load")};
    return sys;
}

EnergySystem toy_regional(int horizon_hours)
{
    EnergySystem sys = toy_base(horizon_hours);
    sys.regions = {country("A"), country("B"), country("F"),
                   subregion("F1", "F", 1.0, 1.0, {}), subregion("F2", "F", 1.0, 1.0, {})};
    auto pv = generation("pv", "pv", 317.0, 6.34, 25.0, "pv");
    pv.potential = {{"A", 40.0}, {"B", 10.0}, {"F1", 10.0}, {"F2", 20.0}};
    auto wind = generation("wind", "wind_onshore", 1140.0, 44.4, 25.0, "wind");
    wind.potential = {{"A", 10.0}, {"B", 40.0}, {"F1", 15.0}, {"F2", 5.0}};
    sys.technologies = {pv, wind, storage("battery", "battery", "elec", 74.7, 164.1, 1.1, 18.0, 0.9)};
    sys.lines = {line("A-B", "elec", "A", "B", 500.0, 2.0, 0.7), line("A-F", "elec", "A", "F1", 400.0, 2.0, 0.7),
                 line("B-F", "elec", "B", "F2", 400.0, 2.0, 0.7),
                 line("F1-F2", "elec", "F1", "F2", 200.0, 1.0, 0.7)};
    sys.demands = {demand("dA", "elec", "A", 40.0, "load"), demand("dB", "elec", "B", 40.0, "load"),
                   demand("dF1", "elec", "F1", 25.0, "load"), demand("dF2", "elec", "F2", 35.0, "load")};
    return sys;
}

EnergySystem random_system(std::uint32_t seed, int horizon_hours)
{
    Rng rng(seed);
    EnergySystem sys;
    sys.horizon_hours = horizon_hours;
    sys.costing.interest_rate = 0.02;
    sys.carriers = {{"elec", CarrierKind::electricity, 1}};
    const int n = rng.integer(2, 3);
    sys.regions.push_back(country("X"));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        ids.push_back("X" + std::to_string(i + 1));
        sys.regions.push_back(subregion(ids.back(), "X", 1.0, 1.0, {}));
    }
    const std::vector<double> sun = solar_series(rng, horizon_hours, 0.8);
    const std::vector<double> shared = weather(rng, horizon_hours);
    auto pv = generation("pv", "pv", 317.0, 6.34, 25.0, "pv");
    auto wind = generation("wind", "wind_onshore", 1140.0, 44.4, 25.0, "wind");
    for (const auto& id : ids) {
        const double q = rng.uniform(0.6, 1.3);
        std::vector<double> p(sun);
        for (auto& v : p) {
            v = std::min(1.0, v * q);
        }
        add_profile(sys, "pv@" + id, quantize(p), Normalization::capacity_factor);
        add_profile(sys, "wind@" + id, quantize(wind_series(rng, shared, rng.uniform(0.15, 0.45), 0.5)),
                    Normalization::capacity_factor);
        pv.potential[id] = round_to(rng.uniform(5.0, 40.0), 0.1);
        wind.potential[id] = round_to(rng.uniform(5.0, 40.0), 0.1);
        sys.demands.push_back(demand("d" + id, "elec", id, round_to(rng.uniform(20.0, 80.0), 0.1), ""));
    }
    // Dispatchable backstop keeps every draw feasible.
    auto backup = generation("gas", "gas", 400.0, 10.0, 30.0, "");
    backup.variable_om = 120.0;
    sys.technologies = {pv, wind, backup, storage("battery", "battery", "elec", 74.7, 164.1, 1.1, 18.0, 0.9)};
    for (int i = 0; i + 1 < n; ++i) {
        sys.lines.push_back(line(ids[i] + "-" + ids[i + 1], "elec", ids[i], ids[i + 1],
                                 round_to(rng.uniform(100.0, 600.0), 10.0), round_to(rng.uniform(0.0, 5.0), 0.5),
                                 0.7));
    }
    if (n == 3 && rng.uniform() < 0.5) {
        sys.lines.push_back(line(ids[0] + "-" + ids[2], "elec", ids[0], ids[2],
                                 round_to(rng.uniform(100.0, 600.0), 10.0), round_to(rng.uniform(0.0, 5.0), 0.5),
                                 0.7));
    }
    return sys;
}

} // namespace enplan
