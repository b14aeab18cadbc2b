#include "evgap/model.hpp"

#include <cstdlib>
#include <fstream>

#ifndef EVGAP_DEFAULT_DATA_DIR
#define EVGAP_DEFAULT_DATA_DIR "data"
#endif

namespace evgap {

std::string_view to_string(Assumption a) { return a == Assumption::Baseline ? "baseline" : "added-supply"; }
std::string_view to_string(FleetKind f) { return f == FleetKind::Sedan ? "sedan" : "mixed"; }

DataPaths DataPaths::in(const std::filesystem::path& dir) {
    return {dir / "supply_production.csv", dir / "supply_reserves.csv", dir / "added_supply.csv",
            dir / "chemistry_intensity.csv", dir / "mix_schedule.csv", dir / "scenario.json",
            dir / "emissions.json", dir / "graphite_ramp.csv"};
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("EVGAP_DATA_DIR"); env && *env) return env;
    return EVGAP_DEFAULT_DATA_DIR;
}

namespace {

std::ifstream open_input(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError(p.string(), 0, "cannot open file");
    return in;
}

}  // namespace

ModelInputs load_inputs(const DataPaths& paths) {
    ModelInputs m;
    {
        auto prod_in = open_input(paths.production);
        auto records = read_supply_records(prod_in, SupplyBasis::Production, paths.production.string());
        auto res_in = open_input(paths.reserves);
        auto reserves = read_supply_records(res_in, SupplyBasis::Reserves, paths.reserves.string());
        records.insert(records.end(), reserves.begin(), reserves.end());
        m.supply = load_supply(records);
    }
    auto added_in = open_input(paths.added_supply);
    m.added = read_added_supply(added_in, paths.added_supply.string());
    auto int_in = open_input(paths.intensity);
    m.intensities = read_intensity_table(int_in, paths.intensity.string());
    auto mix_in = open_input(paths.mix);
    m.mix = read_mix_schedule(mix_in, paths.mix.string());
    auto sc_in = open_input(paths.scenario);
    m.scenario = read_scenario_config(sc_in, paths.scenario.string());
    auto em_in = open_input(paths.emissions);
    m.emissions = read_emissions_config(em_in, paths.emissions.string(), m.scenario.fuel.gasoline_energy);
    auto ramp_in = open_input(paths.graphite_ramp);
    m.ramp = read_graphite_ramp(ramp_in, paths.graphite_ramp.string());
    return m;
}

Model::Model(ModelInputs inputs) : in_(std::move(inputs)) {
    target_share_ = in_.scenario.resolved_target_share();
    for (ScenarioKind k : kAllScenarios) {
        scenarios_[static_cast<std::size_t>(k)] =
            build_scenario(k, in_.scenario.total_sales, in_.scenario.base_share, target_share_, in_.scenario.shape);
    }
    added_ = apply_added_supply(in_.supply, in_.added);
    heavy_ = heavier_fleet_intensities(in_.intensities, in_.fleet);
}

BenefitSeries Model::benefits(int first, int last) const {
    return benefit_series(emission_params(), trajectories(), kReferenceEv, first, last);
}

YearMap<std::int64_t> Model::optimal_ceilings(Assumption a, FleetKind f) const {
    const auto best = optimal_chemistry(supply_kg(SupplyBasis::Production, a), intensities(f)).second.ceiling;
    YearMap<std::int64_t> out;
    for (int y = kWindowFirst; y <= kWindowLast; ++y) out[y] = best;
    return out;
}

YearMap<MixCeiling> Model::mix_ceilings(Assumption a, FleetKind f) const {
    YearMap<MixCeiling> out;
    const auto kg = supply_kg(SupplyBasis::Production, a);
    for (int y = kWindowFirst; y <= kWindowLast; ++y) out[y] = mix_ceiling(kg, in_.mix, intensities(f), y);
    return out;
}

}  // namespace evgap
