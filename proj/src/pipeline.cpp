#include "evgap/pipeline.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace evgap {

std::optional<SupplyBasis> parse_basis(std::string_view s) {
    const std::string k = to_lower(trim(s));
    if (k == "production") return SupplyBasis::Production;
    if (k == "reserves") return SupplyBasis::Reserves;
    return std::nullopt;
}

std::optional<Assumption> parse_assumption(std::string_view s) {
    const std::string k = to_lower(trim(s));
    if (k == "baseline") return Assumption::Baseline;
    if (k == "added-supply" || k == "added") return Assumption::AddedSupply;
    return std::nullopt;
}

std::optional<FleetKind> parse_fleet(std::string_view s) {
    const std::string k = to_lower(trim(s));
    if (k == "sedan") return FleetKind::Sedan;
    if (k == "mixed" || k == "heavier") return FleetKind::Mixed;
    return std::nullopt;
}

std::optional<CapacityMode> parse_capacity_mode(std::string_view s) {
    const std::string k = to_lower(trim(s));
    if (k == "per-chemistry") return CapacityMode::PerChemistry;
    if (k == "optimal") return CapacityMode::Optimal;
    if (k == "mix") return CapacityMode::Mix;
    if (k == "joint") return CapacityMode::Joint;
    return std::nullopt;
}

std::optional<PathwayMode> parse_pathway_mode(std::string_view s) {
    const std::string k = to_lower(trim(s));
    if (k == "thresholds") return PathwayMode::Thresholds;
    if (k == "ramp") return PathwayMode::Ramp;
    if (k == "hev-only") return PathwayMode::HevOnly;
    if (k == "supplement") return PathwayMode::Supplement;
    return std::nullopt;
}

namespace {

std::string describe(const RunConfig& c) {
    return std::string(to_string(c.basis)) + ", " + std::string(to_string(c.assumption)) + ", " +
           std::string(to_string(c.fleet)) + " fleet";
}

ReportTable capacity_report(const Model& m, const RunConfig& c) {
    const auto kg = m.supply_kg(c.basis, c.assumption);
    const auto& table = m.intensities(c.fleet);
    const bool annual = c.basis == SupplyBasis::Production;
    const std::string unit = annual ? "packs/yr" : "packs";
    const int span = kWindowLast - kWindowFirst + 1;
    switch (c.mode) {
        case CapacityMode::PerChemistry:
            return capacity_table("CAP", "Per-chemistry ceilings (" + describe(c) + ")", kg, table, annual);
        case CapacityMode::Optimal: {
            ReportTable t;
            t.id = "CAP";
            t.title = "Optimal chemistry (" + describe(c) + ")";
            t.columns = {"Value"};
            const auto [chem, r] = optimal_chemistry(kg, table);
            t.add_row("Optimal chemistry", "").cells[0] = std::string(to_string(chem));
            t.add_row("Limiting mineral", "").cells[0] = std::string(display_name(r.limiting_mineral));
            t.add_row("Ceiling", unit).cells[0] = static_cast<double>(r.ceiling);
            if (annual) {
                t.add_row("Cumulative 2027-2032", "packs").cells[0] = static_cast<double>(r.ceiling) * span;
            }
            return t;
        }
        case CapacityMode::Mix: {
            ReportTable t;
            t.id = "CAP";
            t.title = "Market-mix ceilings (" + describe(c) + ")";
            for (int y = kWindowFirst; y <= kWindowLast; ++y) t.columns.push_back(std::to_string(y));
            if (annual) t.columns.emplace_back("Cumulative 2027-2032");
            auto& packs = t.add_row("Market mix ceiling", unit);
            auto& lim = t.add_row("Limiting mineral", "");
            double total = 0.0;
            for (int y = kWindowFirst; y <= kWindowLast; ++y) {
                const auto mc = mix_ceiling(kg, m.inputs().mix, table, y);
                const auto i = static_cast<std::size_t>(y - kWindowFirst);
                packs.cells[i] = static_cast<double>(mc.packs);
                lim.cells[i] = std::string(display_name(mc.limiting_mineral));
                total += static_cast<double>(mc.packs);
            }
            if (annual) packs.cells.back() = total;
            return t;
        }
        case CapacityMode::Joint: {
            std::vector<ChemistryId> allowed = c.allowed;
            if (allowed.empty()) allowed.assign(kAllChemistries.begin(), kAllChemistries.end());
            const auto j = joint_allocation(kg, table, allowed);
            ReportTable t;
            t.id = "CAP";
            t.title = "Joint allocation (" + describe(c) + ")";
            t.columns = {"Packs", "Continuous optimum"};
            for (ChemistryId ch : j.allowed) {
                auto& r = t.add_row(std::string(to_string(ch)), unit);
                r.cells = {static_cast<double>(j.whole_packs[ch]), j.packs[ch]};
            }
            auto& r = t.add_row("Total", unit);
            r.cells = {static_cast<double>(j.total_whole_packs), j.objective};
            return t;
        }
    }
    throw std::invalid_argument("unknown capacity mode");
}

ReportTable emissions_report(const Model& m, const RunConfig& c) {
    const int year = c.year.value_or(kWindowFirst);
    ReportTable t;
    t.id = "EMI";
    t.title = "Lifecycle emissions, " + std::to_string(year);
    t.columns = {"Per-mile emissions", "Lifecycle emissions", "Benefit vs ICEV"};
    t.column_units = {"g CO2e/mi", "t CO2e/vehicle", "t CO2e/vehicle"};
    std::vector<Powertrain> pts;
    if (c.powertrain) {
        pts.push_back(*c.powertrain);
    } else {
        pts = {Powertrain::icev(), Powertrain::hev()};
        for (ChemistryId ch : kAllChemistries) pts.push_back(Powertrain::ev(ch));
    }
    for (const auto& p : pts) {
        const auto r = lifecycle(m.emission_params(), m.trajectories(), p, year);
        auto& row = t.add_row(p.label(), "", 2);
        row.cells = {r.per_mile, r.per_vehicle, r.benefit_vs_icev};
    }
    return t;
}

Model load_model(const RunConfig& c) {
    DataPaths paths = DataPaths::in(c.data_dir.empty() ? default_data_dir() : c.data_dir);
    if (c.emissions_path) paths.emissions = *c.emissions_path;
    return Model(load_inputs(paths));
}

}  // namespace

RunResult run(const RunConfig& c) {
    if (c.scenarios.empty()) throw std::invalid_argument("at least one scenario is required");
    const Model m = load_model(c);
    TableOptions opt;
    opt.scenarios = c.scenarios;
    RunResult out;
    auto add = [&](std::string_view id) { out.bundle.tables.push_back(build_table(m, id, opt)); };
    switch (c.command) {
        case Command::Scenarios:
            add("T1.1");
            add("T1.2");
            break;
        case Command::Capacity:
            out.bundle.tables.push_back(capacity_report(m, c));
            break;
        case Command::Emissions:
            out.bundle.tables.push_back(emissions_report(m, c));
            break;
        case Command::Pathways:
            switch (c.pathway) {
                case PathwayMode::Thresholds: add("T6.1"); break;
                case PathwayMode::Ramp: add("T6.2"); break;
                case PathwayMode::HevOnly: add("T6.6"); break;
                case PathwayMode::Supplement: add("T6.7"); break;
            }
            break;
        case Command::Report: {
            const auto& ids = c.table_ids.empty() ? reference_table_ids() : c.table_ids;
            for (const auto& id : ids) add(id);
            break;
        }
        case Command::Diff: {
            const auto bundle = build_tables(m, reference_table_ids());
            const auto dir = c.golden_dir.value_or((c.data_dir.empty() ? default_data_dir() : c.data_dir) / "golden");
            const DiffReport rep = diff_against_golden(bundle, dir, reference_tolerances());
            out.passed = rep.passed;
            out.bundle.tables.push_back(rep.summary());
            DiffReport notable;
            for (const auto& cell : rep.cells) {
                if (cell.status != CellStatus::Pass || !cell.note.empty()) notable.cells.push_back(cell);
            }
            out.bundle.tables.push_back(notable.details());
            break;
        }
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError(path.string(), 0, "cannot open output for writing");
        f << content;
        f.flush();
        if (!f) {
            f.close();
            std::filesystem::remove(tmp);
            throw DataError(path.string(), 0, "write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError(path.string(), 0, "rename failed: " + ec.message());
    }
}

}  // namespace evgap
