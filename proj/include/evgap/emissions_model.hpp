#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>

#include "evgap/battery_capacity.hpp"
#include "evgap/core.hpp"

namespace evgap {

inline constexpr double kMjPerKwh = 3.6;

enum class PowertrainKind { Icev, Hev, Ev };

struct Powertrain {
    PowertrainKind kind = PowertrainKind::Icev;
    ChemistryId chemistry = ChemistryId::NMC811;  // EV only

    static Powertrain icev() { return {PowertrainKind::Icev, ChemistryId::NMC811}; }
    static Powertrain hev() { return {PowertrainKind::Hev, ChemistryId::NMC811}; }
    static Powertrain ev(ChemistryId c) { return {PowertrainKind::Ev, c}; }

    std::string label() const;  // "ICEV", "HEV", "EV NMC811"
    friend bool operator==(const Powertrain& a, const Powertrain& b) {
        return a.kind == b.kind && (a.kind != PowertrainKind::Ev || a.chemistry == b.chemistry);
    }
};

// "ICEV", "HEV", "EV:NMC811", "EV NMC811" or a bare chemistry name.
std::optional<Powertrain> parse_powertrain(std::string_view text);

struct EmissionsParams {
    double aggregate_utilization = 173150.0;  // au, miles
    double gasoline_energy = 120.0;           // EC_g, MJ/gal
    double fuel_production = 0.0;             // e_fp, g CO2e/MJ
    double fuel_usage = 73.0;                 // e_fu, g CO2e/MJ
    double disposal = 0.0;                    // e_vd, g CO2e/vehicle
    double maintenance = 0.0;                 // e_mr, g CO2e/vehicle
    double icev_manufacturing = 0.0;          // e_vm, t CO2e/vehicle
    double hev_manufacturing = 0.0;
    PerChemistry<double> ev_manufacturing{};

    double manufacturing(const Powertrain& p) const;
    void validate() const;
};

enum class GridMode { Table, Linear, Geometric };
std::optional<GridMode> parse_grid_mode(std::string_view text);

// Linear/geometric pass through (start_year, start_rate) and
// (target_year, target_fraction * baseline_2005).
struct GridRule {
    GridMode mode = GridMode::Table;
    double baseline_2005 = 586.2;  // g CO2e/kWh
    int start_year = 2027;
    double start_rate = 309.78;
    int target_year = 2030;
    double target_fraction = 0.5;
    YearMap<double> table;
};

YearMap<double> grid_trajectory(const GridRule& rule, int first_year, int last_year);

struct Trajectories {
    YearMap<double> icev_mpg;
    YearMap<double> hev_mpg;
    YearMap<double> ev_mpge;
    YearMap<double> grid_rate;  // g CO2e/kWh
    double hev_mpg_cap = 75.0;

    double hev_economy(int year) const;  // capped
    // grid must fall strictly over [decline_first, decline_last] and hit the rule's target
    void validate(const GridRule& rule, int decline_first = 2027, int decline_last = 2032) const;
};

struct EmissionsConfig {
    EmissionsParams params;
    Trajectories trajectories;
    GridRule grid;
};

// gasoline_energy fills EC_g when the file omits it; a conflicting value is an error.
EmissionsConfig read_emissions_config(std::istream& in, const std::string& source,
                                      std::optional<double> gasoline_energy = std::nullopt);

double per_mile_emissions(const EmissionsParams& p, const Trajectories& t, const Powertrain& pt, int year);

struct LifecycleResult {
    Powertrain powertrain;
    int year = 0;
    double per_mile = 0.0;         // g CO2e/mi
    double per_vehicle = 0.0;      // t CO2e
    double benefit_vs_icev = 0.0;  // t CO2e
};

LifecycleResult lifecycle(const EmissionsParams& p, const Trajectories& t, const Powertrain& pt, int year);

// Share-normalised EV lifecycle over the year's mix.
double mix_weighted_ev_lifecycle(const EmissionsParams& p, const Trajectories& t, const MixSchedule& mix, int year);

struct EmissionsShortfall {
    YearMap<double> per_year;  // t CO2e
    double aggregate = 0.0;
};

EmissionsShortfall emissions_shortfall(std::span<const ShortfallRecord> shortfalls, const YearMap<double>& benefit);

}  // namespace evgap
