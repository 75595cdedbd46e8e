#pragma once

#include "enplan/error.hpp"
#include "enplan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

// Randomised conservation properties of the data pipeline; each returns the
// number of violated draws.
namespace props {

inline double total(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

inline double total(const std::map<std::string, double>& m)
{
    double s = 0.0;
    for (const auto& [_, v] : m) {
        s += v;
    }
    return s;
}

/// allocate_potential and disaggregate_demand: totals kept, degree-1 homogeneous.
inline int allocation_failures(int trials, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failures = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 1 + static_cast<int>(u(rng) * 8);
        std::vector<enplan::Region> regions;
        for (int i = 0; i < n; ++i) {
            enplan::Region r;
            r.id = "R" + std::to_string(i);
            r.population = u(rng) * 1e7;
            r.gdp = u(rng) * 1e3;
            r.land = {u(rng) * 1e3, u(rng) * 1e3, u(rng) * 1e4, u(rng) * 1e4};
            regions.push_back(r);
        }
        const double national = u(rng) * 1000.0;
        const auto shares = enplan::default_land_shares("wind_onshore");
        const auto pot = enplan::allocate_potential(national, regions, shares);
        if (std::fabs(total(pot) - national) > 1e-6 * std::max(1.0, national)) {
            ++failures;
        }
        const auto doubled = enplan::allocate_potential(2.0 * national, regions, shares);
        for (const auto& [id, v] : pot) {
            if (std::fabs(doubled.at(id) - 2.0 * v) > 1e-9 * std::max(1.0, v)) {
                ++failures;
            }
        }
        const double alpha = u(rng);
        const auto dem = enplan::disaggregate_demand(national, regions, {alpha, 1.0 - alpha});
        if (std::fabs(total(dem) - national) > 1e-9 * std::max(1.0, national)) {
            ++failures;
        }
    }
    return failures;
}

/// scale_cluster_profiles: values stay in [0,1] and the capacity-weighted
/// energy matches the base; only infeasible targets may be rejected.
inline int cluster_failures(int trials, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failures = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const int hours = 1 + static_cast<int>(u(rng) * 200);
        std::vector<double> base(static_cast<std::size_t>(hours));
        for (auto& v : base) {
            v = u(rng) < 0.2 ? 0.0 : u(rng) * 0.9;
        }
        const auto k = static_cast<std::size_t>(1 + static_cast<int>(u(rng) * 4));
        std::vector<double> weights(k);
        std::vector<double> shares(k);
        for (std::size_t c = 0; c < k; ++c) {
            weights[c] = 0.5 + u(rng);
            shares[c] = 0.1 + u(rng);
        }
        const double base_energy = total(base);
        const double share_sum = total(shares);
        std::vector<std::vector<double>> clusters;
        try {
            clusters = enplan::scale_cluster_profiles(base, weights, shares);
        } catch (const enplan::Error&) {
            double mean = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                mean += shares[c] / share_sum * weights[c];
            }
            bool infeasible = false;
            for (double w : weights) {
                infeasible = infeasible || w / mean * base_energy > hours;
            }
            failures += infeasible ? 0 : 1;
            continue;
        }
        double mean_energy = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (double v : clusters[c]) {
                failures += (v >= 0.0 && v <= 1.0) ? 0 : 1;
            }
            mean_energy += shares[c] / share_sum * total(clusters[c]);
        }
        if (std::fabs(mean_energy - base_energy) > 1e-6 * std::max(1e-9, base_energy)) {
            ++failures;
        }
    }
    return failures;
}

/// expand_to_series: the series carries the horizon's share of the annual energy.
inline int series_failures(int trials, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failures = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const int hours = 1 + static_cast<int>(u(rng) * 500);
        std::vector<double> p(static_cast<std::size_t>(hours));
        for (auto& v : p) {
            v = u(rng);
        }
        const double s = total(p);
        for (auto& v : p) {
            v /= s;
        }
        const double annual = u(rng) * 1000.0;
        const auto series = enplan::expand_to_series(annual, p, hours);
        const double expected = annual * 1e6 * hours / 8760.0;
        if (std::fabs(total(series) - expected) > 1e-6 * std::max(1.0, expected)) {
            ++failures;
        }
    }
    return failures;
}

} // namespace props
