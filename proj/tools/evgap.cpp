#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evgap/pipeline.hpp"

using namespace evgap;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiff = 3;

template <class T, class F>
T parse_or_throw(const std::string& text, F parse, const char* what) {
    if (auto v = parse(text)) return *v;
    throw std::invalid_argument(std::string("invalid ") + what + " '" + text + "'");
}

std::vector<ScenarioKind> parse_scenarios(const std::vector<std::string>& items) {
    std::vector<ScenarioKind> out;
    for (const auto& s : items) {
        if (to_lower(s) == "all") return {kAllScenarios.begin(), kAllScenarios.end()};
        out.push_back(parse_or_throw<ScenarioKind>(s, parse_scenario, "scenario"));
    }
    if (out.empty()) out.assign(kAllScenarios.begin(), kAllScenarios.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Critical-mineral supply and EV deployment model"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string data_dir, emissions, format = "table", output;
    app.add_option("--data-dir", data_dir, "Data directory (default: $EVGAP_DATA_DIR or the bundled data)");
    app.add_option("--emissions", emissions, "Emissions calibration file");
    app.add_option("--format", format, "table|csv|json|series");
    app.add_option("-o,--output", output, "Write to file instead of stdout");

    std::vector<std::string> kinds;
    auto* scen = app.add_subcommand("scenarios", "Penetration target and sales scenarios");
    scen->add_option("--kind", kinds, "low|medium|high|all")->delimiter(',');

    std::string basis = "production", assumption = "baseline", fleet = "sedan", cap_mode = "optimal";
    std::vector<std::string> chems;
    auto* cap = app.add_subcommand("capacity", "Battery ceilings under mineral supply");
    cap->add_option("--basis", basis, "production|reserves");
    cap->add_option("--assumption", assumption, "baseline|added-supply");
    cap->add_option("--fleet", fleet, "sedan|mixed");
    cap->add_option("--mode", cap_mode, "per-chemistry|optimal|mix|joint");
    cap->add_option("--chemistries", chems, "Chemistries allowed in joint mode")->delimiter(',');

    int year = 0;
    std::string powertrain;
    auto* emi = app.add_subcommand("emissions", "Lifecycle emissions per vehicle");
    emi->add_option("--year", year, "Model year");
    emi->add_option("--powertrain", powertrain, "ICEV, HEV or EV <chemistry>");

    std::string path_mode = "thresholds";
    std::vector<std::string> path_scen;
    auto* path = app.add_subcommand("pathways", "Resolution pathways");
    path->add_option("--mode", path_mode, "thresholds|ramp|hev-only|supplement");
    path->add_option("--scenario", path_scen, "low|medium|high|all")->delimiter(',');

    std::vector<std::string> tables, rep_scen;
    auto* rep = app.add_subcommand("report", "Reproduce report tables");
    rep->add_option("--table", tables, "Table ids (default: all)")->delimiter(',');
    rep->add_option("--scenario", rep_scen, "low|medium|high|all")->delimiter(',');

    std::string golden;
    auto* diff = app.add_subcommand("diff", "Compare every table against golden fixtures");
    diff->add_option("--golden", golden, "Golden directory (default: <data-dir>/golden)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    RunConfig c;
    try {
        c.format = parse_or_throw<OutputFormat>(format, parse_output_format, "format");
        if (!data_dir.empty()) c.data_dir = data_dir;
        if (!emissions.empty()) c.emissions_path = emissions;
        if (*scen) {
            c.command = Command::Scenarios;
            c.scenarios = parse_scenarios(kinds);
        } else if (*cap) {
            c.command = Command::Capacity;
            c.basis = parse_or_throw<SupplyBasis>(basis, parse_basis, "basis");
            c.assumption = parse_or_throw<Assumption>(assumption, parse_assumption, "assumption");
            c.fleet = parse_or_throw<FleetKind>(fleet, parse_fleet, "fleet");
            c.mode = parse_or_throw<CapacityMode>(cap_mode, parse_capacity_mode, "mode");
            for (const auto& s : chems) c.allowed.push_back(parse_or_throw<ChemistryId>(s, parse_chemistry, "chemistry"));
            if (!chems.empty() && c.mode != CapacityMode::Joint) {
                throw std::invalid_argument("--chemistries requires --mode joint");
            }
        } else if (*emi) {
            c.command = Command::Emissions;
            if (emi->count("--year")) c.year = year;
            if (!powertrain.empty()) c.powertrain = parse_or_throw<Powertrain>(powertrain, parse_powertrain, "powertrain");
        } else if (*path) {
            c.command = Command::Pathways;
            c.pathway = parse_or_throw<PathwayMode>(path_mode, parse_pathway_mode, "mode");
            c.scenarios = parse_scenarios(path_scen);
        } else if (*rep) {
            c.command = Command::Report;
            c.table_ids = tables;
            c.scenarios = parse_scenarios(rep_scen);
        } else {
            c.command = Command::Diff;
            if (!golden.empty()) c.golden_dir = golden;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "evgap: %s\n", e.what());
        return kExitUsage;
    }

    try {
        const RunResult r = run(c);
        const std::string text = render(r.bundle, c.format);
        if (output.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
        } else {
            write_atomic(output, text);
        }
        return r.passed ? 0 : kExitDiff;
    } catch (const DataError& e) {
        std::fprintf(stderr, "evgap: error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "evgap: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "evgap: error: %s\n", e.what());
        return kExitData;
    }
}
