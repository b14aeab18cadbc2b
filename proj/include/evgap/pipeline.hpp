#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evgap/model.hpp"
#include "evgap/reference_tables.hpp"
#include "evgap/report.hpp"

namespace evgap {

enum class Command { Scenarios, Capacity, Emissions, Pathways, Report, Diff };
enum class CapacityMode { PerChemistry, Optimal, Mix, Joint };
enum class PathwayMode { Thresholds, Ramp, HevOnly, Supplement };

std::optional<SupplyBasis> parse_basis(std::string_view s);
std::optional<Assumption> parse_assumption(std::string_view s);
std::optional<FleetKind> parse_fleet(std::string_view s);
std::optional<CapacityMode> parse_capacity_mode(std::string_view s);
std::optional<PathwayMode> parse_pathway_mode(std::string_view s);

struct RunConfig {
    Command command = Command::Report;
    std::vector<ScenarioKind> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
    SupplyBasis basis = SupplyBasis::Production;
    Assumption assumption = Assumption::Baseline;
    FleetKind fleet = FleetKind::Sedan;
    CapacityMode mode = CapacityMode::Optimal;
    std::vector<ChemistryId> allowed;  // joint mode; empty means all
    OutputFormat format = OutputFormat::Human;
    std::filesystem::path data_dir;
    std::optional<std::filesystem::path> emissions_path;
    std::optional<int> year;
    std::optional<Powertrain> powertrain;
    PathwayMode pathway = PathwayMode::Thresholds;
    std::vector<std::string> table_ids;  // empty means all
    std::optional<std::filesystem::path> golden_dir;
};

struct RunResult {
    ReportBundle bundle;
    bool passed = true;  // false when a golden diff fails
};

// Throws DataError on unreadable or invalid inputs and std::invalid_argument on bad options.
RunResult run(const RunConfig& config);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace evgap
