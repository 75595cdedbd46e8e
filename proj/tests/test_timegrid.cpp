#include "enplan/error.hpp"
#include "enplan/timegrid.hpp"

#include <doctest.h>

#include <vector>

using namespace enplan;

TEST_CASE("block counts follow carrier resolutions")
{
    const auto g = TimeGrid::build(24, {{"elec", 1}, {"heat", 4}, {"h2", 24}});
    CHECK(g.block_count("elec") == 24);
    CHECK(g.block_count("heat") == 6);
    CHECK(g.block_count("h2") == 1);
    CHECK(TimeGrid::build(8760, {{"h2", 24}}).block_count("h2") == 365);
    CHECK(TimeGrid::build(1, {{"elec", 1}}).block_count("elec") == 1);
}

TEST_CASE("block lookup")
{
    CHECK(TimeGrid::build(24, {{"heat", 4}}).block_of("heat", 7) == 1);
    CHECK(TimeGrid::build(24, {{"elec", 1}}).block_of("elec", 23) == 23);
    CHECK(TimeGrid::build(24, {{"h2", 24}}).block_of("h2", 13) == 0);
    const auto g = TimeGrid::build(24, {{"heat", 4}});
    CHECK(g.steps_of("heat", 2) == StepRange{8, 12});
    CHECK_THROWS_AS(g.block_of("heat", 24), Error);
    CHECK_THROWS_AS(g.block_of("heat", -1), Error);
    CHECK_THROWS_AS(g.block_of("gas", 0), Error);
}

TEST_CASE("every timestep maps to exactly one block")
{
    const auto g = TimeGrid::build(168, {{"elec", 1}, {"ev", 4}, {"h2", 24}, {"heat", 8}});
    for (const auto& [carrier, res] : g.resolutions()) {
        std::vector<int> hits(168, 0);
        for (int b = 0; b < g.block_count(carrier); ++b) {
            const auto r = g.steps_of(carrier, b);
            CHECK(r.size() == res);
            for (int t = r.first; t < r.last; ++t) {
                ++hits[static_cast<std::size_t>(t)];
                CHECK(g.block_of(carrier, t) == b);
            }
        }
        for (int h : hits) {
            CHECK(h == 1);
        }
    }
}

TEST_CASE("invalid grids are rejected")
{
    CHECK_THROWS_AS(TimeGrid::build(0, {{"elec", 1}}), Error);
    CHECK_THROWS_AS(TimeGrid::build(10, {{"heat", 4}}), Error);
    CHECK_THROWS_AS(TimeGrid::build(24, {{"elec", 0}}), Error);
}
