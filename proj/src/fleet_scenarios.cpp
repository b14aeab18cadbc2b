#include "evgap/fleet_scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace evgap {

void FuelAssumptions::validate() const {
    if (!(fuel_emissions_rate > 0 && icev_mpg > 0 && hev_mpg > 0 && gasoline_energy > 0 && target_gpm > 0)) {
        throw std::invalid_argument("fuel assumptions must be strictly positive");
    }
}

double solve_penetration(const FuelAssumptions& a) {
    a.validate();
    const double tailpipe = a.tailpipe_gpm();
    if (tailpipe <= a.target_gpm) return 0.0;
    return 1.0 - a.target_gpm / tailpipe;
}

std::string_view to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Low: return "low";
        case ScenarioKind::Medium: return "medium";
        case ScenarioKind::High: return "high";
    }
    return "?";
}

std::string_view display_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Low: return "Low";
        case ScenarioKind::Medium: return "Medium";
        case ScenarioKind::High: return "High";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario(std::string_view text) {
    const std::string key = to_lower(trim(text));
    if (key == "low") return ScenarioKind::Low;
    if (key == "medium") return ScenarioKind::Medium;
    if (key == "high") return ScenarioKind::High;
    return std::nullopt;
}

std::int64_t SalesScenario::ev_sales_between(int first, int last) const {
    std::int64_t sum = 0;
    for (int y = first; y <= last; ++y) sum += at_year(ev_sales, y, "ev_sales");
    return sum;
}

namespace {

double medium_share(int year, double base, double target, const ScenarioShape& shape) {
    // anchors: (first, b), (d1, 2b), (d2, 4b), ..., (target_year, T)
    std::vector<std::pair<int, double>> anchors{{shape.first_year, base}};
    double s = base;
    for (int y : shape.doubling_years) {
        s *= 2.0;
        anchors.emplace_back(y, s);
    }
    anchors.emplace_back(shape.target_year, target);
    for (std::size_t k = 1; k < anchors.size(); ++k) {
        auto [y0, s0] = anchors[k - 1];
        auto [y1, s1] = anchors[k];
        if (year <= y1) {
            if (year == y1) return s1;
            return s0 + (s1 - s0) * static_cast<double>(year - y0) / static_cast<double>(y1 - y0);
        }
    }
    return target;
}

}  // namespace

SalesScenario build_scenario(ScenarioKind kind, const YearMap<std::int64_t>& total_sales, double base_share,
                             double target_share, const ScenarioShape& shape) {
    if (!(0.0 < base_share && base_share < target_share && target_share < 1.0)) {
        throw std::invalid_argument("require 0 < base_share < target_share < 1");
    }
    if (shape.target_year <= shape.first_year) throw std::invalid_argument("target_year must follow first_year");
    int prev = shape.first_year;
    for (int y : shape.doubling_years) {
        if (y <= prev || y >= shape.target_year) {
            throw std::invalid_argument("doubling years must increase strictly inside (first_year, target_year)");
        }
        prev = y;
    }

    SalesScenario s;
    s.kind = kind;
    for (int y = shape.first_year; y <= shape.target_year; ++y) {
        auto it = total_sales.find(y);
        if (it == total_sales.end()) {
            throw std::invalid_argument("total_sales missing year " + std::to_string(y));
        }
        if (it->second < 0) throw std::invalid_argument("negative total sales in " + std::to_string(y));
        double share = base_share;
        switch (kind) {
            case ScenarioKind::Low:
                share = y == shape.target_year ? target_share : base_share;
                break;
            case ScenarioKind::Medium:
                share = medium_share(y, base_share, target_share, shape);
                break;
            case ScenarioKind::High:
                share = y == shape.first_year ? base_share : target_share;
                break;
        }
        if (share > 1.0) throw std::invalid_argument("medium share exceeds 1 in " + std::to_string(y));
        s.total_sales[y] = it->second;
        s.ev_share[y] = share;
        s.ev_sales[y] = std::llround(share * static_cast<double>(it->second));
    }
    return s;
}

double ScenarioConfig::resolved_target_share() const {
    return target_share ? *target_share : solve_penetration(fuel);
}

ScenarioConfig read_scenario_config(std::istream& in, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(source, 0, e.what());
    }
    try {
        ScenarioConfig c;
        c.shape.first_year = j.value("first_year", 2022);
        c.shape.target_year = j.value("target_year", 2032);
        if (j.contains("doubling_years")) c.shape.doubling_years = j.at("doubling_years").get<std::vector<int>>();
        c.base_share = j.at("base_share_2022").get<double>();
        if (j.contains("target_share") && !j.at("target_share").is_null()) {
            c.target_share = j.at("target_share").get<double>();
        }
        const auto& f = j.at("fuel");
        c.fuel.fuel_emissions_rate = f.at("fuel_emissions_rate_g_per_mj").get<double>();
        c.fuel.icev_mpg = f.at("icev_mpg").get<double>();
        c.fuel.hev_mpg = f.at("hev_mpg").get<double>();
        c.fuel.gasoline_energy = f.at("gasoline_energy_mj_per_gal").get<double>();
        c.fuel.target_gpm = f.at("target_g_per_mile").get<double>();
        for (const auto& [k, v] : j.at("total_sales").items()) {
            c.total_sales[std::stoi(k)] = v.get<std::int64_t>();
        }
        c.fuel.validate();
        return c;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(source, 0, e.what());
    }
}

}  // namespace evgap
