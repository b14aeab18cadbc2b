#include <doctest.h>

#include <algorithm>
#include <random>

#include "evgap/battery_capacity.hpp"
#include "evgap/emissions_model.hpp"
#include "evgap/pathway_solver.hpp"
#include "evgap/supply_registry.hpp"
#include "support.hpp"

using namespace evgap;
using evgap::test::shipped;

namespace {

constexpr unsigned kSeed = 0x5eed2032u;
constexpr int kTrials = 200;

PerMineral<double> random_supply(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(1e5, 1e10);
    PerMineral<double> s{};
    for (auto& v : s) v = d(rng);
    return s;
}

SalesScenario random_scenario(std::mt19937& rng, double scale = 1.0) {
    std::uniform_int_distribution<std::int64_t> ev(0, 8'000'000), total(10'000'000, 18'000'000);
    SalesScenario s;
    for (int y = 2027; y <= 2032; ++y) {
        s.ev_sales[y] = static_cast<std::int64_t>(static_cast<double>(ev(rng)) * scale);
        s.total_sales[y] = total(rng);
    }
    return s;
}

}  // namespace

TEST_CASE("supply aggregation is permutation invariant") {
    std::mt19937 rng(kSeed);
    auto recs = shipped().supply(Assumption::Baseline).provenance;
    const auto ref = load_supply(recs);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(recs.begin(), recs.end(), rng);
        const auto t = load_supply(recs);
        CHECK(t.production == ref.production);
        CHECK(t.reserves == ref.reserves);
    }
}

TEST_CASE("added supply never lowers production") {
    std::mt19937 rng(kSeed + 1);
    std::uniform_int_distribution<std::int64_t> g(0, 1'000'000'000'000);
    const auto& base = shipped().supply(Assumption::Baseline);
    for (int i = 0; i < kTrials; ++i) {
        AddedSupplySpec spec;
        for (auto& a : spec.additions) a = Tonnes::from_grams(g(rng));
        const auto out = apply_added_supply(base, spec);
        for (MineralId m : kAllMinerals) {
            CHECK(out.production[m] >= base.production[m]);
            CHECK(out.production[m].grams() == base.production[m].grams() + spec.additions[m].grams());
        }
    }
}

TEST_CASE("ceiling homogeneity and argmin scale invariance") {
    std::mt19937 rng(kSeed + 2);
    std::uniform_int_distribution<int> factor(2, 50);
    const auto& table = shipped().intensities(FleetKind::Sedan);
    for (int i = 0; i < kTrials; ++i) {
        const auto s = random_supply(rng);
        const int c = factor(rng);
        PerMineral<double> scaled = s;
        for (auto& v : scaled) v *= c;
        for (ChemistryId ch : kAllChemistries) {
            const auto a = chemistry_ceiling(s, table[ch]);
            const auto b = chemistry_ceiling(scaled, table[ch]);
            CHECK(b.limiting_mineral == a.limiting_mineral);
            // floor(c q) lies in [c floor(q), c floor(q) + c - 1]
            CHECK(b.ceiling >= c * a.ceiling);
            CHECK(b.ceiling <= c * a.ceiling + c - 1);
        }
        CHECK(optimal_chemistry(scaled, table).first == optimal_chemistry(s, table).first);
    }
}

TEST_CASE("LP beats every single chemistry and reduces to it for singletons") {
    std::mt19937 rng(kSeed + 3);
    const auto& table = shipped().intensities(FleetKind::Sedan);
    std::bernoulli_distribution pick(0.5);
    for (int i = 0; i < kTrials; ++i) {
        const auto s = random_supply(rng);
        std::vector<ChemistryId> allowed;
        for (ChemistryId c : kAllChemistries) {
            if (pick(rng)) allowed.push_back(c);
        }
        if (allowed.empty()) allowed.push_back(ChemistryId::LFP);
        const auto j = joint_allocation(s, table, allowed);
        double best_single = 0;
        for (ChemistryId c : allowed) {
            best_single = std::max(best_single, static_cast<double>(chemistry_ceiling(s, table[c]).ceiling));
        }
        CHECK(j.objective >= best_single - 1e-6 * best_single);
        // no mineral is overdrawn
        for (MineralId m : kAllMinerals) {
            double use = 0;
            for (ChemistryId c : allowed) use += j.packs[c] * table[c].content[m];
            CHECK(use <= s[m] * (1 + 1e-9));
        }
        const std::vector<ChemistryId> one{allowed.front()};
        const auto single = joint_allocation(s, table, one);
        const auto ceil = chemistry_ceiling(s, table[one[0]]);
        CHECK(std::abs(single.total_whole_packs - ceil.ceiling) <= 1);
    }
}

TEST_CASE("EV lifecycle rises with the grid rate") {
    std::mt19937 rng(kSeed + 4);
    std::uniform_real_distribution<double> rate(0.0, 800.0), bump(0.01, 100.0);
    const auto& p = shipped().emission_params();
    for (int i = 0; i < kTrials; ++i) {
        Trajectories lo = shipped().trajectories();
        Trajectories hi = lo;
        const double r = rate(rng);
        lo.grid_rate[2030] = r;
        hi.grid_rate[2030] = r + bump(rng);
        for (ChemistryId c : kAllChemistries) {
            const auto a = lifecycle(p, lo, Powertrain::ev(c), 2030);
            const auto b = lifecycle(p, hi, Powertrain::ev(c), 2030);
            CHECK(a.per_mile < b.per_mile);
            CHECK(a.per_vehicle < b.per_vehicle);
        }
        CHECK(lifecycle(p, lo, Powertrain::icev(), 2030).per_vehicle ==
              lifecycle(p, hi, Powertrain::icev(), 2030).per_vehicle);
    }
}

TEST_CASE("shortfall is clamped at zero") {
    std::mt19937 rng(kSeed + 5);
    std::uniform_int_distribution<std::int64_t> pos(0, 12'000'000);
    for (int i = 0; i < kTrials; ++i) {
        const auto s = random_scenario(rng);
        YearMap<std::int64_t> possible;
        for (int y = 2027; y <= 2032; ++y) possible[y] = pos(rng);
        const auto sum = compute_shortfall(s, possible);
        for (const auto& r : sum.records) {
            CHECK(r.shortfall >= 0);
            CHECK(r.shortfall == std::max<std::int64_t>(0, r.desired_evs - r.possible_evs));
            if (r.possible_evs >= r.desired_evs) CHECK(r.shortfall == 0);
        }
    }
}

TEST_CASE("substitution identity on random inputs") {
    std::mt19937 rng(kSeed + 6);
    std::uniform_real_distribution<double> hev(0.1, 5.0), extra(0.5, 15.0);
    for (int i = 0; i < kTrials; ++i) {
        const auto s = random_scenario(rng);
        BenefitSeries b;
        for (int y = 2027; y <= 2032; ++y) {
            b.hev[y] = hev(rng);
            b.ev[y] = b.hev[y] + extra(rng);
        }
        const auto cells = min_ev_supplement(s, b, s.total_sales, 2027, 2032);
        for (const auto& [y, c] : cells) {
            REQUIRE(c.min_evs.has_value());
            const double v = *c.min_evs;
            const double ld = static_cast<double>(s.total_sales.at(y));
            CHECK(v >= 0.0);
            CHECK(v <= ld);
            if (c.clamped) continue;
            const double eb_des = static_cast<double>(s.ev_sales.at(y)) * b.ev.at(y);
            CHECK(std::abs(v * b.ev.at(y) + (ld - v) * b.hev.at(y) - eb_des) <= 1e-6 * std::max(eb_des, 1.0));
        }
    }
}

TEST_CASE("supplement monotonicity") {
    std::mt19937 rng(kSeed + 7);
    std::uniform_real_distribution<double> hev(0.5, 3.0), ev(8.0, 14.0), step(0.01, 0.4);
    for (int i = 0; i < kTrials; ++i) {
        const auto s = random_scenario(rng);
        BenefitSeries b;
        for (int y = 2027; y <= 2032; ++y) {
            b.hev[y] = hev(rng);
            b.ev[y] = ev(rng);
        }
        BenefitSeries more_hev = b;
        for (auto& [y, v] : more_hev.hev) v += step(rng);
        const auto base = min_ev_supplement(s, b, s.total_sales, 2027, 2032);
        const auto h = min_ev_supplement(s, more_hev, s.total_sales, 2027, 2032);
        SalesScenario more_ev = s;
        for (auto& [y, v] : more_ev.ev_sales) v += 100'000;
        const auto d = min_ev_supplement(more_ev, b, s.total_sales, 2027, 2032);
        for (int y = 2027; y <= 2032; ++y) {
            CHECK(*h.at(y).min_evs <= *base.at(y).min_evs);
            CHECK(*d.at(y).min_evs >= *base.at(y).min_evs);
        }
    }
}

TEST_CASE("HEV requirement is homogeneous in desired EVs") {
    std::mt19937 rng(kSeed + 8);
    const auto b = shipped().benefits();
    std::uniform_int_distribution<int> k(2, 9);
    for (int i = 0; i < kTrials; ++i) {
        const auto s = random_scenario(rng);
        const int c = k(rng);
        SalesScenario sc = s;
        for (auto& [y, v] : sc.ev_sales) v *= c;
        const auto a = hev_only_requirement(s, b, 2027, 2032);
        const auto r = hev_only_requirement(sc, b, 2027, 2032);
        for (int y = 2027; y <= 2032; ++y) {
            CHECK(*r.desired_hevs.at(y) == doctest::Approx(c * *a.desired_hevs.at(y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("threshold multiplier round-trips through the ceiling") {
    std::mt19937 rng(kSeed + 9);
    std::uniform_real_distribution<double> target(1e4, 5e7);
    const auto& ref = shipped().intensities(FleetKind::Sedan)[ChemistryId::NMC811];
    const auto& prod = shipped().supply(Assumption::Baseline).production;
    const auto kg0 = to_kilograms(prod);
    const auto lim = chemistry_ceiling(kg0, ref).limiting_mineral;
    const double max = kg0[lim] / ref.content[lim];
    for (int i = 0; i < kTrials; ++i) {
        const double t = std::round(target(rng));
        PerMineral<double> kg{};
        for (const auto& r : required_production(t, max, prod)) kg[r.mineral] = r.required_max * 1000.0;
        CHECK(std::abs(static_cast<double>(chemistry_ceiling(kg, ref).ceiling) - t) <= 1.0);
    }
}
