#include "evgap/pathway_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evgap/csv.hpp"

namespace evgap {

std::vector<ProductionThreshold> required_production(double target_evs, double max_evs,
                                                     const PerMineral<Tonnes>& current) {
    if (!(max_evs > 0.0)) throw std::invalid_argument("max EV deployment must be > 0");
    if (!(target_evs > 0.0)) throw std::invalid_argument("target EV deployment must be > 0");
    const double k = target_evs / max_evs;
    std::vector<ProductionThreshold> out;
    for (MineralId m : kAllMinerals) {
        ProductionThreshold t;
        t.mineral = m;
        t.current = current[m].value();
        t.required_min = t.required_max = k * t.current;
        t.multiplier = k;
        t.exceeds_current = t.required_max > t.current;
        out.push_back(t);
    }
    return out;
}

std::vector<ProductionThreshold> mix_production_thresholds(double target_evs, const PerMineral<Tonnes>& current,
                                                           const MixSchedule& mix, const IntensityTable& table,
                                                           int first_year, int last_year) {
    if (!(target_evs > 0.0)) throw std::invalid_argument("target EV deployment must be > 0");
    if (last_year < first_year) throw std::invalid_argument("empty year range");
    std::vector<ProductionThreshold> out;
    for (MineralId m : kAllMinerals) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int y = first_year; y <= last_year; ++y) {
            // target / (supply / w) * supply, with w in kg per vehicle
            const double req = target_evs * weighted_content(mix, table, y)[m] / 1000.0;
            lo = std::min(lo, req);
            hi = std::max(hi, req);
        }
        if (hi <= 0.0) continue;
        ProductionThreshold t;
        t.mineral = m;
        t.current = current[m].value();
        t.required_min = lo;
        t.required_max = hi;
        t.multiplier = t.current > 0.0 ? hi / t.current : std::numeric_limits<double>::infinity();
        t.exceeds_current = hi > t.current;
        out.push_back(t);
    }
    return out;
}

void GraphiteRamp::validate(int nondecreasing_through) const {
    double prev = -1.0;
    for (const auto& [y, v] : schedule) {
        if (!(v >= 0.0)) throw std::invalid_argument("ramp value must be >= 0 in " + std::to_string(y));
        if (y <= nondecreasing_through && v < prev) {
            throw std::invalid_argument("ramp must not decrease through " + std::to_string(nondecreasing_through));
        }
        prev = v;
    }
}

GraphiteRamp read_graphite_ramp(std::istream& in, const std::string& source) {
    const CsvTable t = read_csv(in, source);
    const auto c_year = t.column("year");
    const auto c_tons = t.column("tons");
    GraphiteRamp r;
    for (const auto& row : t.rows) {
        const int y = parse_year(row.fields[c_year], source, row.line);
        if (r.schedule.count(y)) throw DataError(source, row.line, "duplicate year");
        r.schedule[y] = parse_number(row.fields[c_tons], source, row.line);
    }
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(source, 0, e.what());
    }
    return r;
}

YearMap<bool> ramp_sufficiency(const GraphiteRamp& ramp, double required) {
    YearMap<bool> out;
    for (const auto& [y, v] : ramp.schedule) out[y] = v >= required;
    return out;
}

BenefitSeries benefit_series(const EmissionsParams& p, const Trajectories& t, ChemistryId reference_ev,
                             int first_year, int last_year) {
    BenefitSeries b;
    for (int y = first_year; y <= last_year; ++y) {
        b.ev[y] = lifecycle(p, t, Powertrain::ev(reference_ev), y).benefit_vs_icev;
        b.hev[y] = lifecycle(p, t, Powertrain::hev(), y).benefit_vs_icev;
    }
    return b;
}

HevRequirement hev_only_requirement(const SalesScenario& scenario, const BenefitSeries& benefits, int first_year,
                                    int last_year) {
    HevRequirement r;
    for (int y = first_year; y <= last_year; ++y) {
        const double eb_h = at_year(benefits.hev, y, "HEV benefit");
        const double eb_des = static_cast<double>(at_year(scenario.ev_sales, y, "ev_sales")) *
                              at_year(benefits.ev, y, "EV benefit");
        if (eb_h <= 0.0) {
            r.desired_hevs[y] = std::nullopt;
            r.exceeds_sales[y] = false;
            continue;
        }
        const double v = eb_des / eb_h;
        r.desired_hevs[y] = v;
        r.exceeds_sales[y] = v > static_cast<double>(at_year(scenario.total_sales, y, "total_sales"));
    }
    return r;
}

YearMap<SupplementCell> min_ev_supplement(const SalesScenario& scenario, const BenefitSeries& benefits,
                                          const YearMap<std::int64_t>& light_duty_sales, int first_year,
                                          int last_year) {
    YearMap<SupplementCell> out;
    for (int y = first_year; y <= last_year; ++y) {
        const double eb_ev = at_year(benefits.ev, y, "EV benefit");
        const double eb_h = at_year(benefits.hev, y, "HEV benefit");
        const double ld = static_cast<double>(at_year(light_duty_sales, y, "light-duty sales"));
        const double eb_des = static_cast<double>(at_year(scenario.ev_sales, y, "ev_sales")) * eb_ev;
        SupplementCell c;
        const double gap = eb_des - ld * eb_h;
        c.condition = gap == 0.0 ? (eb_des == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                 : (std::abs(eb_des) + std::abs(ld * eb_h)) / std::abs(gap);
        c.ill_conditioned = c.condition > kIllConditioned;
        if (eb_ev <= eb_h) {
            c.degenerate = true;
            out[y] = c;
            continue;
        }
        const double raw = gap / (eb_ev - eb_h);
        const double v = std::clamp(raw, 0.0, ld);
        c.clamped = v != raw;
        c.min_evs = v;
        if (!c.clamped) {
            const double total = v * eb_ev + (ld - v) * eb_h;
            c.residual = std::abs(total - eb_des) / std::max(std::abs(eb_des), 1e-300);
        }
        out[y] = c;
    }
    return out;
}

HevPlan plan_hev_pathway(const SalesScenario& scenario, const BenefitSeries& benefits, int first_year,
                         int last_year) {
    HevPlan plan;
    plan.scenario = scenario.kind;
    const HevRequirement req = hev_only_requirement(scenario, benefits, first_year, last_year);
    const auto sup = min_ev_supplement(scenario, benefits, scenario.total_sales, first_year, last_year);
    for (int y = first_year; y <= last_year; ++y) {
        const auto& d = req.desired_hevs.at(y);
        plan.feasible[y] = d.has_value() && !req.exceeds_sales.at(y);
        if (d) plan.desired_hevs[y] = *d;
        if (sup.at(y).min_evs) plan.min_evs[y] = *sup.at(y).min_evs;
    }
    return plan;
}

}  // namespace evgap
