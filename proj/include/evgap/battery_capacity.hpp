#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evgap/core.hpp"
#include "evgap/fleet_scenarios.hpp"

namespace evgap {

struct ContentBounds {
    double low = 0.0;
    double high = 0.0;
};

struct ChemistryIntensity {
    ChemistryId chemistry = ChemistryId::NMC811;
    PerMineral<double> content{};  // kg per pack
    double pack_kwh = 75.0;
    double range_miles = 300.0;
    PerMineral<std::optional<ContentBounds>> bounds{};

    bool any_content() const;
    void validate() const;
};

using IntensityTable = PerChemistry<ChemistryIntensity>;

// Rows: chemistry,mineral,kg[,low,high]. Every chemistry must list all eight minerals.
IntensityTable read_intensity_table(std::istream& in, const std::string& source, double pack_kwh = 75.0,
                                    double range_miles = 300.0);

// Per-year chemistry shares as fractions. A year may sum to less than 1:
// the remainder is sold in chemistries outside the model.
struct MixSchedule {
    YearMap<PerChemistry<double>> shares;

    const PerChemistry<double>& at(int year) const { return at_year(shares, year, "mix schedule"); }
    double total(int year) const;
    void validate() const;
};

// Rows: year,chemistry,share (fraction) or year,chemistry,share_pct.
MixSchedule read_mix_schedule(std::istream& in, const std::string& source);

PerMineral<double> weighted_content(const MixSchedule& mix, const IntensityTable& table, int year);

struct CapacityResult {
    ChemistryId chemistry = ChemistryId::NMC811;
    PerMineral<std::optional<std::int64_t>> per_mineral_ceiling{};  // nullopt: zero content
    std::int64_t ceiling = 0;
    MineralId limiting_mineral = MineralId::Graphite;
};

CapacityResult chemistry_ceiling(const PerMineral<double>& supply_kg, const ChemistryIntensity& intensity);
std::pair<ChemistryId, CapacityResult> optimal_chemistry(const PerMineral<double>& supply_kg,
                                                         const IntensityTable& table);

struct JointAllocation {
    PerChemistry<double> packs{};               // continuous optimum
    PerChemistry<std::int64_t> whole_packs{};   // floored
    std::vector<ChemistryId> allowed;
    double objective = 0.0;
    std::int64_t total_whole_packs = 0;
};

JointAllocation joint_allocation(const PerMineral<double>& supply_kg, const IntensityTable& table,
                                 std::span<const ChemistryId> allowed);

struct DemandTable {
    ScenarioKind scenario = ScenarioKind::Low;
    YearMap<PerMineral<double>> tonnes;

    PerMineral<double> annual_average() const;
};

DemandTable mix_demand(const SalesScenario& scenario, const MixSchedule& mix, const IntensityTable& table,
                       int first_year, int last_year);

struct MixCeiling {
    int year = 0;
    std::int64_t packs = 0;
    MineralId limiting_mineral = MineralId::Graphite;
    PerMineral<std::optional<double>> per_mineral{};  // unfloored supply / weighted content
};

MixCeiling mix_ceiling(const PerMineral<double>& supply_kg, const MixSchedule& mix, const IntensityTable& table,
                       int year);

struct ShortfallRecord {
    ScenarioKind scenario = ScenarioKind::Low;
    int year = 0;
    std::int64_t desired_evs = 0;
    std::int64_t possible_evs = 0;
    std::int64_t shortfall = 0;
};

struct ShortfallSummary {
    std::vector<ShortfallRecord> records;
    std::int64_t desired_total = 0;
    std::int64_t possible_total = 0;
    std::int64_t shortfall_total = 0;
};

ShortfallSummary compute_shortfall(const SalesScenario& scenario, const YearMap<std::int64_t>& possible);

struct DownsizeResult {
    PerMineral<double> intensity{};  // kg/vehicle
    MineralId binding_mineral = MineralId::Graphite;
    double implied_pack_kwh = 0.0;
};

DownsizeResult downsize(const PerMineral<double>& supply_kg, double desired_evs, const ChemistryIntensity& reference);

struct FleetMix {
    double sedan_fraction = 0.29;
    double truck_fraction = 0.71;
    double truck_pack_kwh = 100.0;

    void validate(double sedan_pack_kwh) const;
};

ChemistryIntensity heavier_fleet_intensity(const ChemistryIntensity& base, const FleetMix& fleet);
IntensityTable heavier_fleet_intensities(const IntensityTable& base, const FleetMix& fleet);

}  // namespace evgap
