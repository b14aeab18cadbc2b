#include "evgap/emissions_model.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace evgap {

std::string Powertrain::label() const {
    switch (kind) {
        case PowertrainKind::Icev: return "ICEV";
        case PowertrainKind::Hev: return "HEV";
        case PowertrainKind::Ev: return "EV " + std::string(to_string(chemistry));
    }
    return "?";
}

std::optional<Powertrain> parse_powertrain(std::string_view text) {
    std::string key = to_lower(trim(text));
    if (key == "icev") return Powertrain::icev();
    if (key == "hev") return Powertrain::hev();
    if (key.rfind("ev", 0) == 0 && key.size() > 2 && (key[2] == ':' || key[2] == ' ' || key[2] == '-')) {
        key = key.substr(3);
    }
    if (auto c = parse_chemistry(key)) return Powertrain::ev(*c);
    return std::nullopt;
}

double EmissionsParams::manufacturing(const Powertrain& p) const {
    switch (p.kind) {
        case PowertrainKind::Icev: return icev_manufacturing;
        case PowertrainKind::Hev: return hev_manufacturing;
        case PowertrainKind::Ev: return ev_manufacturing[p.chemistry];
    }
    return 0.0;
}

void EmissionsParams::validate() const {
    if (!(aggregate_utilization > 0.0)) throw std::invalid_argument("aggregate utilization must be > 0");
    bool ok = gasoline_energy >= 0 && fuel_production >= 0 && fuel_usage >= 0 && disposal >= 0 &&
              maintenance >= 0 && icev_manufacturing >= 0 && hev_manufacturing >= 0;
    for (double v : ev_manufacturing) ok = ok && v >= 0;
    if (!ok) throw std::invalid_argument("emissions parameters must be non-negative");
}

std::optional<GridMode> parse_grid_mode(std::string_view text) {
    const std::string key = to_lower(trim(text));
    if (key == "table") return GridMode::Table;
    if (key == "linear") return GridMode::Linear;
    if (key == "geometric") return GridMode::Geometric;
    return std::nullopt;
}

YearMap<double> grid_trajectory(const GridRule& rule, int first_year, int last_year) {
    if (rule.mode == GridMode::Table) {
        YearMap<double> out;
        for (int y = first_year; y <= last_year; ++y) out[y] = at_year(rule.table, y, "grid table");
        return out;
    }
    if (rule.target_year == rule.start_year) throw std::invalid_argument("grid rule: start and target year coincide");
    const double target = rule.target_fraction * rule.baseline_2005;
    const double span = static_cast<double>(rule.target_year - rule.start_year);
    YearMap<double> out;
    for (int y = first_year; y <= last_year; ++y) {
        const double k = static_cast<double>(y - rule.start_year) / span;
        out[y] = rule.mode == GridMode::Linear ? rule.start_rate + (target - rule.start_rate) * k
                                               : rule.start_rate * std::pow(target / rule.start_rate, k);
    }
    return out;
}

double Trajectories::hev_economy(int year) const {
    return std::min(at_year(hev_mpg, year, "hev_mpg"), hev_mpg_cap);
}

void Trajectories::validate(const GridRule& rule, int decline_first, int decline_last) const {
    auto positive = [](const YearMap<double>& m, const char* what) {
        for (const auto& [y, v] : m) {
            if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be > 0 in " + std::to_string(y));
        }
    };
    positive(icev_mpg, "icev_mpg");
    positive(hev_mpg, "hev_mpg");
    positive(ev_mpge, "ev_mpge");
    for (const auto& [y, v] : grid_rate) {
        if (!(v >= 0.0)) throw std::invalid_argument("grid rate must be >= 0 in " + std::to_string(y));
    }
    for (int y = decline_first + 1; y <= decline_last; ++y) {
        auto a = grid_rate.find(y - 1);
        auto b = grid_rate.find(y);
        if (a != grid_rate.end() && b != grid_rate.end() && !(b->second < a->second)) {
            throw std::invalid_argument("grid rate must fall strictly from " + std::to_string(y - 1) + " to " +
                                        std::to_string(y));
        }
    }
    if (auto it = grid_rate.find(rule.target_year); it != grid_rate.end()) {
        const double want = rule.target_fraction * rule.baseline_2005;
        if (std::abs(it->second - want) > 0.005) {
            throw std::invalid_argument("grid rate in " + std::to_string(rule.target_year) + " must equal " +
                                        std::to_string(want));
        }
    }
}

namespace {

YearMap<double> year_series(const nlohmann::json& j) {
    YearMap<double> out;
    for (const auto& [k, v] : j.items()) out[std::stoi(k)] = v.get<double>();
    return out;
}

}  // namespace

EmissionsConfig read_emissions_config(std::istream& in, const std::string& source,
                                      std::optional<double> gasoline_energy) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(source, 0, e.what());
    }
    try {
        EmissionsConfig c;
        auto& p = c.params;
        p.aggregate_utilization = j.at("aggregate_utilization_miles").get<double>();
        if (j.contains("gasoline_energy_mj_per_gal")) {
            p.gasoline_energy = j.at("gasoline_energy_mj_per_gal").get<double>();
            if (gasoline_energy && std::abs(*gasoline_energy - p.gasoline_energy) > 1e-12) {
                throw std::invalid_argument("gasoline_energy_mj_per_gal differs from the scenario fuel assumptions");
            }
        } else if (gasoline_energy) {
            p.gasoline_energy = *gasoline_energy;
        } else {
            throw std::invalid_argument("gasoline_energy_mj_per_gal is required");
        }
        p.fuel_production = j.at("fuel_production_g_per_mj").get<double>();
        p.fuel_usage = j.at("fuel_usage_g_per_mj").get<double>();
        p.disposal = j.value("disposal_g", 0.0);
        p.maintenance = j.value("maintenance_g", 0.0);
        const auto& vm = j.at("manufacturing_t");
        p.icev_manufacturing = vm.at("ICEV").get<double>();
        p.hev_manufacturing = vm.at("HEV").get<double>();
        for (ChemistryId ch : kAllChemistries) {
            p.ev_manufacturing[ch] = vm.at(std::string(to_string(ch))).get<double>();
        }
        p.validate();

        const auto& tj = j.at("trajectories");
        auto& t = c.trajectories;
        t.icev_mpg = year_series(tj.at("icev_mpg"));
        t.hev_mpg = year_series(tj.at("hev_mpg"));
        t.ev_mpge = year_series(tj.at("ev_mpge"));
        t.hev_mpg_cap = j.value("hev_mpg_cap", 75.0);

        const auto& g = j.at("grid");
        auto mode = parse_grid_mode(g.at("mode").get<std::string>());
        if (!mode) throw std::invalid_argument("unknown grid mode '" + g.at("mode").get<std::string>() + "'");
        c.grid.mode = *mode;
        c.grid.baseline_2005 = g.value("baseline_2005", c.grid.baseline_2005);
        c.grid.start_year = g.value("start_year", c.grid.start_year);
        c.grid.start_rate = g.value("start_rate", c.grid.start_rate);
        c.grid.target_year = g.value("target_year", c.grid.target_year);
        c.grid.target_fraction = g.value("target_fraction", c.grid.target_fraction);
        if (g.contains("table")) c.grid.table = year_series(g.at("table"));
        if (t.icev_mpg.empty()) throw std::invalid_argument("icev_mpg trajectory is empty");
        t.grid_rate = grid_trajectory(c.grid, t.icev_mpg.begin()->first, t.icev_mpg.rbegin()->first);
        t.validate(c.grid);
        return c;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(source, 0, e.what());
    }
}

double per_mile_emissions(const EmissionsParams& p, const Trajectories& t, const Powertrain& pt, int year) {
    const double fixed = (p.manufacturing(pt) * 1e6 + p.disposal + p.maintenance) / p.aggregate_utilization;
    double economy = 0.0;
    double fuel_g_per_mj = 0.0;
    switch (pt.kind) {
        case PowertrainKind::Icev:
            economy = at_year(t.icev_mpg, year, "icev_mpg");
            fuel_g_per_mj = p.fuel_production + p.fuel_usage;
            break;
        case PowertrainKind::Hev:
            economy = t.hev_economy(year);
            fuel_g_per_mj = p.fuel_production + p.fuel_usage;
            break;
        case PowertrainKind::Ev:
            economy = at_year(t.ev_mpge, year, "ev_mpge");
            fuel_g_per_mj = at_year(t.grid_rate, year, "grid_rate") / kMjPerKwh;
            break;
    }
    return fixed + (1.0 / economy) * fuel_g_per_mj * p.gasoline_energy;
}

LifecycleResult lifecycle(const EmissionsParams& p, const Trajectories& t, const Powertrain& pt, int year) {
    LifecycleResult r;
    r.powertrain = pt;
    r.year = year;
    r.per_mile = per_mile_emissions(p, t, pt, year);
    r.per_vehicle = p.aggregate_utilization / 1e6 * r.per_mile;
    const double icev = p.aggregate_utilization / 1e6 * per_mile_emissions(p, t, Powertrain::icev(), year);
    r.benefit_vs_icev = pt.kind == PowertrainKind::Icev ? 0.0 : icev - r.per_vehicle;
    return r;
}

double mix_weighted_ev_lifecycle(const EmissionsParams& p, const Trajectories& t, const MixSchedule& mix, int year) {
    const auto& shares = mix.at(year);
    double num = 0.0;
    double den = 0.0;
    for (ChemistryId c : kAllChemistries) {
        num += shares[c] * lifecycle(p, t, Powertrain::ev(c), year).per_vehicle;
        den += shares[c];
    }
    return num / den;
}

EmissionsShortfall emissions_shortfall(std::span<const ShortfallRecord> shortfalls, const YearMap<double>& benefit) {
    EmissionsShortfall out;
    for (const auto& r : shortfalls) {
        const double v = static_cast<double>(r.shortfall) * at_year(benefit, r.year, "benefit");
        out.per_year[r.year] += v;
        out.aggregate += v;
    }
    return out;
}

}  // namespace evgap
