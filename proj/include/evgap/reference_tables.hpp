#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgap/model.hpp"
#include "evgap/report.hpp"

namespace evgap {

struct TableOptions {
    std::vector<ScenarioKind> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
};

// Ids in report order: T1.1 ... T6.7, RES.
const std::vector<std::string>& reference_table_ids();

// Throws std::invalid_argument on an unknown id.
ReportTable build_table(const Model& m, std::string_view id, const TableOptions& opt = {});
ReportBundle build_tables(const Model& m, std::span<const std::string> ids, const TableOptions& opt = {});

ToleranceBook reference_tolerances();

// Three significant figures, never finer than 1,000 t.
double round_requirement(double tonnes);

// Per-mineral ceilings plus limiting mineral and ceiling rows; annual adds a 2027-2032 cumulative row.
ReportTable capacity_table(std::string id, std::string title, const PerMineral<double>& supply_kg,
                           const IntensityTable& table, bool annual = true);

// Sum of record contributions of one source kind.
PerMineral<Tonnes> supply_by_kind(const SupplyTable& s, SupplyBasis b, SourceKind k);

}  // namespace evgap
