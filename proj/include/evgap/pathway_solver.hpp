#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "evgap/battery_capacity.hpp"
#include "evgap/emissions_model.hpp"
#include "evgap/fleet_scenarios.hpp"
#include "evgap/tonnes.hpp"

namespace evgap {

struct ProductionThreshold {
    MineralId mineral = MineralId::Graphite;
    double current = 0.0;       // t/yr
    double required_min = 0.0;  // t/yr
    double required_max = 0.0;  // t/yr
    double multiplier = 0.0;    // largest target / max over the range
    bool exceeds_current = false;
};

// Uniform multiplier: required = target / max * current for every mineral.
std::vector<ProductionThreshold> required_production(double target_evs, double max_evs,
                                                     const PerMineral<Tonnes>& current);

// Per-mineral market-mix form over [first_year, last_year]:
// required_i(t) = target / (supply_i / weighted_content_i(t)) * supply_i.
// Minerals with zero weighted content throughout are omitted.
std::vector<ProductionThreshold> mix_production_thresholds(double target_evs, const PerMineral<Tonnes>& current,
                                                           const MixSchedule& mix, const IntensityTable& table,
                                                           int first_year, int last_year);

struct GraphiteRamp {
    YearMap<double> schedule;  // t/yr
    void validate(int nondecreasing_through = 2028) const;
};

GraphiteRamp read_graphite_ramp(std::istream& in, const std::string& source);
YearMap<bool> ramp_sufficiency(const GraphiteRamp& ramp, double required);

struct BenefitSeries {
    YearMap<double> ev;   // t CO2e per vehicle vs ICEV
    YearMap<double> hev;
};

BenefitSeries benefit_series(const EmissionsParams& p, const Trajectories& t, ChemistryId reference_ev,
                             int first_year, int last_year);

struct HevRequirement {
    YearMap<std::optional<double>> desired_hevs;  // nullopt: HEV benefit <= 0
    YearMap<bool> exceeds_sales;
};

HevRequirement hev_only_requirement(const SalesScenario& scenario, const BenefitSeries& benefits, int first_year,
                                    int last_year);

struct SupplementCell {
    std::optional<double> min_evs;  // nullopt when degenerate
    bool degenerate = false;        // EV benefit <= HEV benefit
    bool clamped = false;           // closed form fell outside [0, LD]
    double residual = 0.0;          // relative, unclamped cells only
    double condition = 0.0;         // (|EB_des| + |LD EB_H|) / |EB_des - LD EB_H|
    bool ill_conditioned = false;   // condition > kIllConditioned
};

inline constexpr double kIllConditioned = 10.0;

YearMap<SupplementCell> min_ev_supplement(const SalesScenario& scenario, const BenefitSeries& benefits,
                                          const YearMap<std::int64_t>& light_duty_sales, int first_year,
                                          int last_year);

struct HevPlan {
    ScenarioKind scenario = ScenarioKind::Low;
    YearMap<double> desired_hevs;
    YearMap<double> min_evs;
    YearMap<bool> feasible;  // desired_hevs <= projected sales
};

HevPlan plan_hev_pathway(const SalesScenario& scenario, const BenefitSeries& benefits, int first_year,
                         int last_year);

}  // namespace evgap
