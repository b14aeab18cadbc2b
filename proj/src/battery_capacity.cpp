#include "evgap/battery_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evgap/csv.hpp"
#include "evgap/linear_program.hpp"

namespace evgap {

namespace {

// Whole packs; the relative nudge keeps exact quotients like 2e8 from landing on 199999999.
std::int64_t floor_packs(double q) {
    if (!(q >= 0.0)) return 0;
    return static_cast<std::int64_t>(std::floor(q * (1.0 + 1e-12)));
}

void check_supply(const PerMineral<double>& supply_kg) {
    for (MineralId m : kAllMinerals) {
        if (!(supply_kg[m] >= 0.0) || !std::isfinite(supply_kg[m])) {
            throw std::invalid_argument("supply for " + std::string(to_string(m)) + " must be finite and >= 0");
        }
    }
}

}  // namespace

bool ChemistryIntensity::any_content() const {
    return std::any_of(content.begin(), content.end(), [](double v) { return v > 0.0; });
}

void ChemistryIntensity::validate() const {
    const std::string name(to_string(chemistry));
    for (MineralId m : kAllMinerals) {
        if (!(content[m] >= 0.0)) throw std::invalid_argument(name + ": negative content");
        if (bounds[m]) {
            const auto& b = *bounds[m];
            if (b.low > b.high) throw std::invalid_argument(name + ": bounds inverted");
            if (std::abs(0.5 * (b.low + b.high) - content[m]) > 1e-9 * std::max(1.0, content[m])) {
                throw std::invalid_argument(name + ": " + std::string(to_string(m)) +
                                            " content must equal the mean of its bounds");
            }
        }
    }
    if (!any_content()) throw std::invalid_argument(name + ": all contents zero");
    if (chemistry == ChemistryId::LFP &&
        (content[MineralId::Cobalt] > 0 || content[MineralId::Nickel] > 0 || content[MineralId::Manganese] > 0)) {
        throw std::invalid_argument("LFP must carry no cobalt, nickel or manganese");
    }
    if (chemistry == ChemistryId::NCA && content[MineralId::Manganese] > 0) {
        throw std::invalid_argument("NCA must carry no manganese");
    }
    if (chemistry != ChemistryId::LFP && content[MineralId::Phosphate] > 0) {
        throw std::invalid_argument(name + ": phosphate is LFP-only");
    }
    if (!(pack_kwh > 0.0) || !(range_miles > 0.0)) throw std::invalid_argument(name + ": bad pack reference");
}

IntensityTable read_intensity_table(std::istream& in, const std::string& source, double pack_kwh,
                                    double range_miles) {
    const CsvTable t = read_csv(in, source);
    const auto c_chem = t.column("chemistry");
    const auto c_min = t.column("mineral");
    const auto c_kg = t.column("kg");
    const bool has_bounds = t.has_column("low") && t.has_column("high");

    IntensityTable table;
    PerChemistry<PerMineral<bool>> seen{};
    for (ChemistryId c : kAllChemistries) {
        table[c].chemistry = c;
        table[c].pack_kwh = pack_kwh;
        table[c].range_miles = range_miles;
    }
    for (const auto& row : t.rows) {
        const auto& f = row.fields;
        auto c = parse_chemistry(f[c_chem]);
        if (!c) throw DataError(source, row.line, "unknown chemistry '" + f[c_chem] + "'");
        auto m = parse_mineral(f[c_min]);
        if (!m) throw DataError(source, row.line, "unknown mineral '" + f[c_min] + "'");
        if (seen[*c][*m]) throw DataError(source, row.line, "duplicate (chemistry, mineral)");
        seen[*c][*m] = true;
        const double kg = parse_number(f[c_kg], source, row.line);
        if (kg < 0) throw DataError(source, row.line, "negative content");
        table[*c].content[*m] = kg;
        if (has_bounds) {
            const auto& lo = f[t.column("low")];
            const auto& hi = f[t.column("high")];
            if (lo.empty() != hi.empty()) throw DataError(source, row.line, "bounds need both low and high");
            if (!lo.empty()) {
                table[*c].bounds[*m] =
                    ContentBounds{parse_number(lo, source, row.line), parse_number(hi, source, row.line)};
            }
        }
    }
    for (ChemistryId c : kAllChemistries) {
        for (MineralId m : kAllMinerals) {
            if (!seen[c][m]) {
                throw DataError(source, 0,
                                std::string(to_string(c)) + " is missing mineral " + std::string(to_string(m)));
            }
        }
        try {
            table[c].validate();
        } catch (const std::invalid_argument& e) {
            throw DataError(source, 0, e.what());
        }
    }
    return table;
}

double MixSchedule::total(int year) const {
    double s = 0.0;
    for (double v : at(year)) s += v;
    return s;
}

void MixSchedule::validate() const {
    if (shares.empty()) throw std::invalid_argument("mix schedule is empty");
    int prev = shares.begin()->first - 1;
    for (const auto& [year, row] : shares) {
        if (year != prev + 1) throw std::invalid_argument("mix schedule has a gap before " + std::to_string(year));
        prev = year;
        double sum = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) throw std::invalid_argument("negative share in " + std::to_string(year));
            sum += v;
        }
        if (!(sum > 0.0) || sum > 1.0 + 1e-9) {
            throw std::invalid_argument("shares for " + std::to_string(year) + " must sum to (0, 1]");
        }
    }
}

MixSchedule read_mix_schedule(std::istream& in, const std::string& source) {
    const CsvTable t = read_csv(in, source);
    const auto c_year = t.column("year");
    const auto c_chem = t.column("chemistry");
    const bool pct = t.has_column("share_pct");
    const auto c_share = t.column(pct ? "share_pct" : "share");

    MixSchedule mix;
    YearMap<PerChemistry<bool>> seen;
    for (const auto& row : t.rows) {
        const auto& f = row.fields;
        const int year = parse_year(f[c_year], source, row.line);
        auto c = parse_chemistry(f[c_chem]);
        if (!c) throw DataError(source, row.line, "unknown chemistry '" + f[c_chem] + "'");
        if (seen[year][*c]) throw DataError(source, row.line, "duplicate (year, chemistry)");
        seen[year][*c] = true;
        double share = parse_number(f[c_share], source, row.line);
        if (pct) share /= 100.0;
        mix.shares[year][*c] = share;
    }
    try {
        mix.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(source, 0, e.what());
    }
    return mix;
}

PerMineral<double> weighted_content(const MixSchedule& mix, const IntensityTable& table, int year) {
    const auto& shares = mix.at(year);
    PerMineral<double> w{};
    for (MineralId m : kAllMinerals) {
        for (ChemistryId c : kAllChemistries) w[m] += table[c].content[m] * shares[c];
    }
    return w;
}

CapacityResult chemistry_ceiling(const PerMineral<double>& supply_kg, const ChemistryIntensity& intensity) {
    if (!intensity.any_content()) {
        throw std::invalid_argument(std::string(to_string(intensity.chemistry)) + ": all contents zero");
    }
    check_supply(supply_kg);
    CapacityResult r;
    r.chemistry = intensity.chemistry;
    double best = std::numeric_limits<double>::infinity();
    for (MineralId m : kAllMinerals) {
        const double c = intensity.content[m];
        if (c <= 0.0) continue;
        const double q = supply_kg[m] / c;
        r.per_mineral_ceiling[m] = floor_packs(q);
        if (q < best) {
            best = q;
            r.limiting_mineral = m;
        }
    }
    r.ceiling = *r.per_mineral_ceiling[r.limiting_mineral];
    return r;
}

std::pair<ChemistryId, CapacityResult> optimal_chemistry(const PerMineral<double>& supply_kg,
                                                         const IntensityTable& table) {
    std::optional<CapacityResult> best;
    for (ChemistryId c : kAllChemistries) {
        CapacityResult r = chemistry_ceiling(supply_kg, table[c]);
        if (!best || r.ceiling > best->ceiling) best = r;
    }
    return {best->chemistry, *best};
}

JointAllocation joint_allocation(const PerMineral<double>& supply_kg, const IntensityTable& table,
                                 std::span<const ChemistryId> allowed) {
    if (allowed.empty()) throw std::invalid_argument("joint allocation needs at least one chemistry");
    check_supply(supply_kg);
    JointAllocation out;
    for (ChemistryId c : allowed) {
        if (std::find(out.allowed.begin(), out.allowed.end(), c) == out.allowed.end()) out.allowed.push_back(c);
    }
    std::sort(out.allowed.begin(), out.allowed.end());

    LinearProgram lp;
    lp.objective.assign(out.allowed.size(), 1.0);
    for (MineralId m : kAllMinerals) {
        std::vector<double> row;
        bool used = false;
        for (ChemistryId c : out.allowed) {
            row.push_back(table[c].content[m]);
            used = used || table[c].content[m] > 0.0;
        }
        if (!used) continue;
        lp.constraints.push_back(std::move(row));
        lp.bounds.push_back(supply_kg[m]);
    }
    const LpSolution sol = maximize(lp);
    if (sol.status != LpStatus::Optimal) {
        throw std::invalid_argument("joint allocation unbounded: a chemistry has no mineral content");
    }
    for (std::size_t k = 0; k < out.allowed.size(); ++k) {
        const ChemistryId c = out.allowed[k];
        out.packs[c] = sol.x[k];
        out.whole_packs[c] = floor_packs(sol.x[k]);
        out.total_whole_packs += out.whole_packs[c];
    }
    out.objective = sol.objective;
    return out;
}

PerMineral<double> DemandTable::annual_average() const {
    PerMineral<double> avg{};
    if (tonnes.empty()) return avg;
    for (const auto& [year, row] : tonnes) {
        for (MineralId m : kAllMinerals) avg[m] += row[m];
    }
    for (MineralId m : kAllMinerals) avg[m] /= static_cast<double>(tonnes.size());
    return avg;
}

DemandTable mix_demand(const SalesScenario& scenario, const MixSchedule& mix, const IntensityTable& table,
                       int first_year, int last_year) {
    DemandTable d;
    d.scenario = scenario.kind;
    for (int y = first_year; y <= last_year; ++y) {
        if (!mix.shares.count(y)) throw std::invalid_argument("mix schedule has no shares for " + std::to_string(y));
        const auto sales = static_cast<double>(at_year(scenario.ev_sales, y, "ev_sales"));
        const PerMineral<double> w = weighted_content(mix, table, y);
        PerMineral<double> row{};
        for (MineralId m : kAllMinerals) row[m] = w[m] * sales / 1000.0;
        d.tonnes[y] = row;
    }
    return d;
}

MixCeiling mix_ceiling(const PerMineral<double>& supply_kg, const MixSchedule& mix, const IntensityTable& table,
                       int year) {
    check_supply(supply_kg);
    const PerMineral<double> w = weighted_content(mix, table, year);
    MixCeiling r;
    r.year = year;
    double best = std::numeric_limits<double>::infinity();
    for (MineralId m : kAllMinerals) {
        if (w[m] <= 0.0) continue;
        const double q = supply_kg[m] / w[m];
        r.per_mineral[m] = q;
        if (q < best) {
            best = q;
            r.limiting_mineral = m;
        }
    }
    if (!std::isfinite(best)) throw std::invalid_argument("all weighted contents zero in " + std::to_string(year));
    r.packs = floor_packs(best);
    return r;
}

ShortfallSummary compute_shortfall(const SalesScenario& scenario, const YearMap<std::int64_t>& possible) {
    ShortfallSummary s;
    for (const auto& [year, p] : possible) {
        if (p < 0) throw std::invalid_argument("possible EVs must be >= 0");
        ShortfallRecord r;
        r.scenario = scenario.kind;
        r.year = year;
        r.desired_evs = at_year(scenario.ev_sales, year, "ev_sales");
        r.possible_evs = p;
        r.shortfall = std::max<std::int64_t>(0, r.desired_evs - p);
        s.desired_total += r.desired_evs;
        s.possible_total += r.possible_evs;
        s.shortfall_total += r.shortfall;
        s.records.push_back(r);
    }
    return s;
}

DownsizeResult downsize(const PerMineral<double>& supply_kg, double desired_evs, const ChemistryIntensity& reference) {
    if (!(desired_evs > 0.0)) throw std::invalid_argument("desired EVs must be > 0");
    if (!reference.any_content()) throw std::invalid_argument("reference chemistry has no content");
    check_supply(supply_kg);
    DownsizeResult r;
    double best = std::numeric_limits<double>::infinity();
    for (MineralId m : kAllMinerals) {
        r.intensity[m] = supply_kg[m] / desired_evs;
        if (reference.content[m] <= 0.0) continue;
        const double ratio = r.intensity[m] / reference.content[m];
        if (ratio < best) {
            best = ratio;
            r.binding_mineral = m;
        }
    }
    r.implied_pack_kwh = reference.pack_kwh * best;
    return r;
}

void FleetMix::validate(double sedan_pack_kwh) const {
    if (sedan_fraction < 0 || truck_fraction < 0 || std::abs(sedan_fraction + truck_fraction - 1.0) > 1e-9) {
        throw std::invalid_argument("fleet fractions must be non-negative and sum to 1");
    }
    if (truck_pack_kwh < sedan_pack_kwh) throw std::invalid_argument("truck pack smaller than sedan pack");
}

ChemistryIntensity heavier_fleet_intensity(const ChemistryIntensity& base, const FleetMix& fleet) {
    fleet.validate(base.pack_kwh);
    const double factor = fleet.sedan_fraction + fleet.truck_fraction * fleet.truck_pack_kwh / base.pack_kwh;
    ChemistryIntensity out = base;
    for (MineralId m : kAllMinerals) {
        out.content[m] = base.content[m] * factor;
        if (base.bounds[m]) out.bounds[m] = ContentBounds{base.bounds[m]->low * factor, base.bounds[m]->high * factor};
    }
    out.pack_kwh = base.pack_kwh * factor;
    return out;
}

IntensityTable heavier_fleet_intensities(const IntensityTable& base, const FleetMix& fleet) {
    IntensityTable out;
    for (ChemistryId c : kAllChemistries) out[c] = heavier_fleet_intensity(base[c], fleet);
    return out;
}

}  // namespace evgap
