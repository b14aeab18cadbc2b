#pragma once

#include <filesystem>
#include <optional>

#include "evgap/battery_capacity.hpp"
#include "evgap/emissions_model.hpp"
#include "evgap/fleet_scenarios.hpp"
#include "evgap/pathway_solver.hpp"
#include "evgap/supply_registry.hpp"

namespace evgap {

inline constexpr int kWindowFirst = 2027;  // reporting window
inline constexpr int kWindowLast = 2032;
inline constexpr int kMixFirst = 2024;
inline constexpr ChemistryId kReferenceEv = ChemistryId::NMC811;

enum class Assumption { Baseline, AddedSupply };
enum class FleetKind { Sedan, Mixed };

std::string_view to_string(Assumption a);
std::string_view to_string(FleetKind f);

struct DataPaths {
    std::filesystem::path production;
    std::filesystem::path reserves;
    std::filesystem::path added_supply;
    std::filesystem::path intensity;
    std::filesystem::path mix;
    std::filesystem::path scenario;
    std::filesystem::path emissions;
    std::filesystem::path graphite_ramp;

    static DataPaths in(const std::filesystem::path& dir);
};

// EVGAP_DATA_DIR when set, else the directory compiled in at build time.
std::filesystem::path default_data_dir();

struct ModelInputs {
    SupplyTable supply;
    AddedSupplySpec added;
    IntensityTable intensities;
    MixSchedule mix;
    ScenarioConfig scenario;
    EmissionsConfig emissions;
    GraphiteRamp ramp;
    FleetMix fleet;
};

ModelInputs load_inputs(const DataPaths& paths);

class Model {
public:
    explicit Model(ModelInputs inputs);

    const ModelInputs& inputs() const { return in_; }
    double target_share() const { return target_share_; }
    const SalesScenario& scenario(ScenarioKind k) const { return scenarios_[static_cast<std::size_t>(k)]; }

    const SupplyTable& supply(Assumption a) const { return a == Assumption::Baseline ? in_.supply : added_; }
    PerMineral<double> supply_kg(SupplyBasis b, Assumption a) const { return to_kilograms(supply(a).totals(b)); }
    const IntensityTable& intensities(FleetKind f) const { return f == FleetKind::Sedan ? in_.intensities : heavy_; }

    const EmissionsParams& emission_params() const { return in_.emissions.params; }
    const Trajectories& trajectories() const { return in_.emissions.trajectories; }
    BenefitSeries benefits(int first = kWindowFirst, int last = kWindowLast) const;

    // Per-year NMC-optimal and market-mix ceilings over the window.
    YearMap<std::int64_t> optimal_ceilings(Assumption a, FleetKind f) const;
    YearMap<MixCeiling> mix_ceilings(Assumption a, FleetKind f) const;

private:
    ModelInputs in_;
    double target_share_ = 0.0;
    std::array<SalesScenario, 3> scenarios_;
    SupplyTable added_;
    IntensityTable heavy_;
};

}  // namespace evgap
