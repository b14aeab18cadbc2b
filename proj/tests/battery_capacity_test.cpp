#include <doctest.h>

#include "evgap/battery_capacity.hpp"
#include "support.hpp"

using namespace evgap;
using evgap::test::rel_err;
using evgap::test::shipped;

namespace {

PerMineral<double> production_kg(Assumption a = Assumption::Baseline) {
    return shipped().supply_kg(SupplyBasis::Production, a);
}

PerMineral<double> reserves_kg() { return shipped().supply_kg(SupplyBasis::Reserves, Assumption::Baseline); }

const IntensityTable& sedan() { return shipped().intensities(FleetKind::Sedan); }

// Printed Table 3.1, kg per sedan pack.
const PerChemistry<PerMineral<double>> kPrinted31{{{
    {{{9.90, 26.58, 26.13, 24.79, 60.06, 44.72, 25.56, 0.00}}},
    {{{8.94, 14.06, 35.78, 20.45, 67.72, 44.72, 25.56, 0.00}}},
    {{{8.47, 15.53, 45.17, 14.12, 70.58, 46.59, 26.82, 0.00}}},
    {{{6.28, 6.28, 49.01, 6.28, 56.55, 37.70, 25.13, 0.00}}},
    {{{8.35, 2.78, 59.87, 0.00, 61.26, 41.77, 23.67, 0.00}}},
    {{{8.78, 0.00, 0.00, 0.00, 96.54, 64.36, 38.03, 36.57}}},
}}};

}  // namespace

TEST_CASE("shipped contents round to the printed intensity table") {
    for (ChemistryId c : kAllChemistries) {
        for (MineralId m : kAllMinerals) {
            CHECK_MESSAGE(std::abs(sedan()[c].content[m] - kPrinted31[c][m]) <= 0.005 + 1e-9,
                          to_string(c), " ", to_string(m));
        }
    }
    const auto& nmc111 = sedan()[ChemistryId::NMC111];
    const std::pair<MineralId, std::pair<double, double>> bounds[] = {
        {MineralId::Lithium, {9.20, 10.61}},
        {MineralId::Cobalt, {23.00, 30.16}},
        {MineralId::Nickel, {22.23, 30.02}},
        {MineralId::Manganese, {21.47, 28.11}},
    };
    for (const auto& [m, lh] : bounds) {
        REQUIRE(nmc111.bounds[m].has_value());
        CHECK(std::abs(nmc111.bounds[m]->low - lh.first) <= 0.005 + 1e-9);
        CHECK(std::abs(nmc111.bounds[m]->high - lh.second) <= 0.005 + 1e-9);
        CHECK(nmc111.content[m] == doctest::Approx(0.5 * (nmc111.bounds[m]->low + nmc111.bounds[m]->high)));
    }
}

TEST_CASE("single chemistry ceilings at current production") {
    const auto nmc811 = chemistry_ceiling(production_kg(), sedan()[ChemistryId::NMC811]);
    CHECK(nmc811.ceiling == 848'804);
    CHECK(nmc811.limiting_mineral == MineralId::Graphite);
    const auto lfp = chemistry_ceiling(production_kg(), sedan()[ChemistryId::LFP]);
    CHECK(rel_err(static_cast<double>(lfp.ceiling), 497'226) < 0.001);
    CHECK(lfp.limiting_mineral == MineralId::Graphite);
    CHECK_FALSE(lfp.per_mineral_ceiling[MineralId::Cobalt].has_value());
}

TEST_CASE("zero graphite gives a zero ceiling limited by graphite") {
    auto kg = production_kg();
    kg[MineralId::Graphite] = 0.0;
    const auto r = chemistry_ceiling(kg, sedan()[ChemistryId::NMC811]);
    CHECK(r.ceiling == 0);
    CHECK(r.limiting_mineral == MineralId::Graphite);
}

TEST_CASE("all-zero contents are rejected") {
    ChemistryIntensity empty;
    CHECK_THROWS_AS(chemistry_ceiling(production_kg(), empty), std::invalid_argument);
}

TEST_CASE("optimal chemistry") {
    const auto [chem, r] = optimal_chemistry(production_kg(), sedan());
    CHECK(chem == ChemistryId::NMC811);
    CHECK(r.ceiling == 848'804);
    const auto [chem2, r2] = optimal_chemistry(production_kg(Assumption::AddedSupply), sedan());
    CHECK(chem2 == ChemistryId::NMC811);
    CHECK(rel_err(static_cast<double>(r2.ceiling), 3'854'985) < 0.001);
}

TEST_CASE("reserve ceilings and their ordering") {
    const auto kg = reserves_kg();
    auto ceil = [&](ChemistryId c) { return static_cast<double>(chemistry_ceiling(kg, sedan()[c]).ceiling); };
    CHECK(rel_err(ceil(ChemistryId::LFP), 989.27e6) < 0.005);
    CHECK(rel_err(ceil(ChemistryId::NCA), 400.37e6) < 0.005);
    CHECK(rel_err(ceil(ChemistryId::NMC811), 201.80e6) < 0.005);
    CHECK(rel_err(ceil(ChemistryId::NMC523), 90.21e6) < 0.005);
    CHECK(rel_err(ceil(ChemistryId::NMC622), 81.66e6) < 0.005);
    CHECK(rel_err(ceil(ChemistryId::NMC111), 47.71e6) < 0.005);
    CHECK(ceil(ChemistryId::LFP) > ceil(ChemistryId::NCA));
    CHECK(ceil(ChemistryId::NCA) > ceil(ChemistryId::NMC811));
    CHECK(ceil(ChemistryId::NMC811) > ceil(ChemistryId::NMC523));
    CHECK(ceil(ChemistryId::NMC523) > ceil(ChemistryId::NMC622));
    CHECK(ceil(ChemistryId::NMC622) > ceil(ChemistryId::NMC111));
}

TEST_CASE("joint allocation over reserves") {
    const std::vector<ChemistryId> both{ChemistryId::LFP, ChemistryId::NCA};
    const auto j = joint_allocation(reserves_kg(), sedan(), both);
    CHECK(rel_err(j.packs[ChemistryId::LFP], 735.19e6) < 0.005);
    CHECK(rel_err(j.packs[ChemistryId::NCA], 400.37e6) < 0.005);
    CHECK(rel_err(j.objective, 1.14e9) < 0.005);
    CHECK(j.total_whole_packs == j.whole_packs[ChemistryId::LFP] + j.whole_packs[ChemistryId::NCA]);

    const std::vector<ChemistryId> lfp{ChemistryId::LFP};
    CHECK(rel_err(joint_allocation(reserves_kg(), sedan(), lfp).objective, 989.27e6) < 0.005);
    CHECK_THROWS_AS(joint_allocation(reserves_kg(), sedan(), std::vector<ChemistryId>{}), std::invalid_argument);
}

TEST_CASE("market-mix demand") {
    const auto& m = shipped();
    const auto med = mix_demand(m.scenario(ScenarioKind::Medium), m.inputs().mix, sedan(), 2027, 2032);
    CHECK(rel_err(med.tonnes.at(2032)[MineralId::Graphite], 472'625) < 0.001);
    const auto low = mix_demand(m.scenario(ScenarioKind::Low), m.inputs().mix, sedan(), 2027, 2032);
    CHECK(rel_err(low.tonnes.at(2027)[MineralId::Lithium], 7'666) < 0.001);
}

TEST_CASE("zero sales give zero demand") {
    SalesScenario s;
    s.ev_sales[2027] = 0;
    const auto d = mix_demand(s, shipped().inputs().mix, sedan(), 2027, 2027);
    for (MineralId k : kAllMinerals) CHECK(d.tonnes.at(2027)[k] == 0.0);
}

TEST_CASE("mix year gap is rejected") {
    MixSchedule mix;
    mix.shares[2027][ChemistryId::NMC811] = 1.0;
    mix.shares[2029][ChemistryId::NMC811] = 1.0;
    CHECK_THROWS_AS(mix.validate(), std::invalid_argument);
    const auto& s = shipped().scenario(ScenarioKind::Low);
    CHECK_THROWS_AS(mix_demand(s, mix, sedan(), 2027, 2029), std::invalid_argument);
}

TEST_CASE("demand over sales reproduces the weighted content") {
    const auto& m = shipped();
    const auto& s = m.scenario(ScenarioKind::High);
    const auto d = mix_demand(s, m.inputs().mix, sedan(), 2027, 2032);
    for (int y = 2027; y <= 2032; ++y) {
        const auto w = weighted_content(m.inputs().mix, sedan(), y);
        for (MineralId k : kAllMinerals) {
            CHECK(d.tonnes.at(y)[k] * 1000.0 / static_cast<double>(s.ev_sales.at(y)) ==
                  doctest::Approx(w[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("market-mix ceilings") {
    const auto& m = shipped();
    const auto added = production_kg(Assumption::AddedSupply);
    CHECK(rel_err(static_cast<double>(mix_ceiling(added, m.inputs().mix, sedan(), 2027).packs), 2'717'719) < 0.001);
    CHECK(rel_err(static_cast<double>(mix_ceiling(added, m.inputs().mix, sedan(), 2032).packs), 2'631'540) < 0.001);
    double total = 0;
    for (int y = 2027; y <= 2032; ++y) total += static_cast<double>(mix_ceiling(production_kg(), m.inputs().mix, sedan(), y).packs);
    CHECK(rel_err(total, 3.51e6) < 0.005);

    MixSchedule none;
    none.shares[2027] = PerChemistry<double>{};
    none.shares[2027][ChemistryId::NMC811] = 0.0;
    CHECK_THROWS_AS(mix_ceiling(production_kg(), none, sedan(), 2027), std::invalid_argument);
}

TEST_CASE("shortfall") {
    const auto& low = shipped().scenario(ScenarioKind::Low);
    YearMap<std::int64_t> possible;
    for (int y = 2027; y <= 2032; ++y) possible[y] = 848'804;
    const auto s = compute_shortfall(low, possible);
    CHECK(s.records.back().year == 2032);
    CHECK(s.records.back().shortfall == 5'711'810 - 848'804);

    YearMap<std::int64_t> plenty{{2032, 10'000'000}};
    CHECK(compute_shortfall(low, plenty).records[0].shortfall == 0);
}

TEST_CASE("downsizing") {
    const auto& ref = sedan()[ChemistryId::NMC811];
    const auto cur = downsize(production_kg(), 5'711'810, ref);
    CHECK(cur.binding_mineral == MineralId::Graphite);
    CHECK(std::abs(cur.intensity[MineralId::Graphite] - 8.40) <= 0.01);
    CHECK(std::abs(cur.implied_pack_kwh - 11.0) <= 1.0);
    const auto add = downsize(production_kg(Assumption::AddedSupply), 5'711'810, ref);
    CHECK(std::abs(add.intensity[MineralId::Graphite] - 38.17) <= 0.01);

    const auto ceiling = chemistry_ceiling(production_kg(), ref);
    const double exact = production_kg()[MineralId::Graphite] / ref.content[MineralId::Graphite];
    CHECK(downsize(production_kg(), exact, ref).implied_pack_kwh == doctest::Approx(75.0).epsilon(1e-12));
    CHECK(downsize(production_kg(), static_cast<double>(ceiling.ceiling), ref).implied_pack_kwh ==
          doctest::Approx(75.0).epsilon(1e-5));
}

TEST_CASE("heavier fleet intensity") {
    const auto& base = sedan()[ChemistryId::NMC811];
    const auto heavy = heavier_fleet_intensity(base, FleetMix{});
    const double oracle = 0.29 * base.content[MineralId::Graphite] + 0.71 * base.content[MineralId::Graphite] * 100.0 / 75.0;
    CHECK(heavy.content[MineralId::Graphite] == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(heavy.content[MineralId::Graphite] - 69.93) <= 0.01);
    CHECK(std::abs(heavy.content[MineralId::Lithium] - 7.77) <= 0.01);

    const auto same = heavier_fleet_intensity(base, FleetMix{1.0, 0.0, 100.0});
    CHECK(same.content == base.content);

    const auto heavy_table = heavier_fleet_intensities(sedan(), FleetMix{});
    CHECK(rel_err(static_cast<double>(chemistry_ceiling(production_kg(), heavy_table[ChemistryId::NMC811]).ceiling),
                  686'365) < 0.001);
    CHECK(rel_err(static_cast<double>(
                      chemistry_ceiling(production_kg(Assumption::AddedSupply), heavy_table[ChemistryId::NMC811]).ceiling),
                  3'117'239) < 0.001);
    CHECK_THROWS_AS(heavier_fleet_intensity(base, FleetMix{0.5, 0.6, 100.0}), std::invalid_argument);
}

TEST_CASE("intensity file validation") {
    auto in = evgap::test::text("chemistry,mineral,kg\nLFP,cobalt,1\n");
    CHECK_THROWS_AS(read_intensity_table(in, "x.csv"), DataError);
    auto dup = evgap::test::text("chemistry,mineral,kg\nLFP,cobalt,0\nLFP,cobalt,0\n");
    try {
        read_intensity_table(dup, "x.csv");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line() == 3);
    }
}
