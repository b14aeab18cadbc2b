#include <doctest.h>

#include "evgap/fleet_scenarios.hpp"
#include "support.hpp"

using namespace evgap;
using evgap::test::rel_err;

namespace {

FuelAssumptions table_1_1(double energy) {
    FuelAssumptions a;
    a.fuel_emissions_rate = 73.0;
    a.icev_mpg = 66.40;
    a.gasoline_energy = energy;
    a.target_gpm = 82.0;
    return a;
}

YearMap<std::int64_t> flat_sales(std::int64_t v) {
    YearMap<std::int64_t> s;
    for (int y = 2022; y <= 2032; ++y) s[y] = v;
    return s;
}

}  // namespace

TEST_CASE("penetration at 120 MJ/gal matches hand arithmetic") {
    const double oracle = 1.0 - 82.0 / (73.0 * 120.0 / 66.4);
    CHECK(solve_penetration(table_1_1(120.0)) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(solve_penetration(table_1_1(120.0)) == doctest::Approx(0.37845).epsilon(1e-4));
}

TEST_CASE("penetration with the shipped calibration") {
    const auto& m = evgap::test::shipped();
    CHECK(std::abs(m.target_share() - 0.3782) < 0.00005);
}

TEST_CASE("target already met gives zero penetration") {
    auto a = table_1_1(120.0);
    a.target_gpm = a.tailpipe_gpm();
    CHECK(solve_penetration(a) == 0.0);
    a.target_gpm = a.tailpipe_gpm() * 2;
    CHECK(solve_penetration(a) == 0.0);
}

TEST_CASE("printed scenario cells") {
    const auto& m = evgap::test::shipped();
    const auto& med = m.scenario(ScenarioKind::Medium);
    CHECK(std::abs(med.ev_share.at(2028) * 100 - 26.40) < 0.005);
    CHECK(rel_err(static_cast<double>(med.ev_sales.at(2028)), 4'047'671) < 0.001);
    CHECK(m.scenario(ScenarioKind::Low).ev_sales.at(2032) == 5'711'810);
    CHECK(rel_err(static_cast<double>(m.scenario(ScenarioKind::High).ev_sales.at(2023)), 5'521'946) < 0.001);
}

TEST_CASE("medium shares interpolate between anchors") {
    const auto& med = evgap::test::shipped().scenario(ScenarioKind::Medium);
    for (int k = 1; k <= 2; ++k) {
        const double oracle = 11.77 + k * (23.55 - 11.77) / 3.0;
        CHECK(std::abs(med.ev_share.at(2024 + k) * 100 - oracle) < 0.01);
    }
    CHECK(std::abs(med.ev_share.at(2025) * 100 - 15.70) < 0.01);
    CHECK(std::abs(med.ev_share.at(2026) * 100 - 19.62) < 0.01);
}

TEST_CASE("medium shares are piecewise linear") {
    const auto& med = evgap::test::shipped().scenario(ScenarioKind::Medium);
    const std::vector<std::pair<int, int>> segments{{2022, 2024}, {2024, 2027}, {2027, 2032}};
    for (auto [a, b] : segments) {
        for (int y = a + 1; y < b; ++y) {
            const double second = med.ev_share.at(y + 1) - 2 * med.ev_share.at(y) + med.ev_share.at(y - 1);
            CHECK(std::abs(second) < 1e-12);
        }
    }
}

TEST_CASE("scenario ordering and target year") {
    const auto& m = evgap::test::shipped();
    const auto& lo = m.scenario(ScenarioKind::Low);
    const auto& me = m.scenario(ScenarioKind::Medium);
    const auto& hi = m.scenario(ScenarioKind::High);
    for (int y = 2023; y <= 2032; ++y) {
        CHECK(lo.ev_sales.at(y) <= me.ev_sales.at(y));
        CHECK(me.ev_sales.at(y) <= hi.ev_sales.at(y));
    }
    for (const auto* s : {&lo, &me, &hi}) CHECK(s->ev_share.at(2032) == m.target_share());
}

TEST_CASE("shares rise weakly within each kind") {
    for (ScenarioKind k : kAllScenarios) {
        const auto s = build_scenario(k, flat_sales(1'000'000), 0.05, 0.4);
        for (int y = 2023; y <= 2032; ++y) {
            CHECK(s.ev_share.at(y) >= s.ev_share.at(y - 1));
            CHECK(s.ev_sales.at(y) >= s.ev_sales.at(y - 1));
        }
    }
}

TEST_CASE("cumulative desired EVs 2027-2032") {
    const auto& m = evgap::test::shipped();
    CHECK(rel_err(static_cast<double>(m.scenario(ScenarioKind::Medium).ev_sales_between(2027, 2032)), 28.05e6) <
          0.001);
}

TEST_CASE("missing sales year is rejected") {
    auto sales = flat_sales(100);
    sales.erase(2029);
    CHECK_THROWS_AS(build_scenario(ScenarioKind::Low, sales, 0.05, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(ScenarioKind::Low, flat_sales(100), 0.5, 0.4), std::invalid_argument);
}

TEST_CASE("scenario config errors carry the file name") {
    auto in = evgap::test::text("{\"base_share_2022\": 0.05}");
    try {
        read_scenario_config(in, "scenario.json");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.source() == "scenario.json");
    }
    auto bad = evgap::test::text("{ not json");
    CHECK_THROWS_AS(read_scenario_config(bad, "scenario.json"), DataError);
}
