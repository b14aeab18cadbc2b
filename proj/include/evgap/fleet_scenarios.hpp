#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "evgap/core.hpp"

namespace evgap {

struct FuelAssumptions {
    double fuel_emissions_rate = 73.0;  // g CO2/MJ
    double icev_mpg = 66.40;
    double hev_mpg = 75.0;
    double gasoline_energy = 120.0;     // MJ/gal, LHV
    double target_gpm = 82.0;           // g CO2/mi

    double tailpipe_gpm() const { return fuel_emissions_rate * gasoline_energy / icev_mpg; }
    void validate() const;
};

// Share of sales that must be zero-tailpipe so the fleet average meets target_gpm.
double solve_penetration(const FuelAssumptions& a);

enum class ScenarioKind { Low, Medium, High };
inline constexpr std::array<ScenarioKind, 3> kAllScenarios{ScenarioKind::Low, ScenarioKind::Medium,
                                                          ScenarioKind::High};
std::string_view to_string(ScenarioKind k);
std::string_view display_name(ScenarioKind k);  // "Low"
std::optional<ScenarioKind> parse_scenario(std::string_view text);

struct ScenarioShape {
    int first_year = 2022;
    int target_year = 2032;
    std::vector<int> doubling_years{2024, 2027};  // medium: share doubles at each
};

struct SalesScenario {
    ScenarioKind kind = ScenarioKind::Low;
    YearMap<std::int64_t> total_sales;
    YearMap<double> ev_share;
    YearMap<std::int64_t> ev_sales;

    std::int64_t ev_sales_between(int first, int last) const;
};

SalesScenario build_scenario(ScenarioKind kind, const YearMap<std::int64_t>& total_sales,
                             double base_share, double target_share, const ScenarioShape& shape = {});

struct ScenarioConfig {
    ScenarioShape shape;
    double base_share = 0.0;
    std::optional<double> target_share;
    FuelAssumptions fuel;
    YearMap<std::int64_t> total_sales;

    double resolved_target_share() const;
};

ScenarioConfig read_scenario_config(std::istream& in, const std::string& source);

}  // namespace evgap
