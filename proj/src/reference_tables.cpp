#include "evgap/reference_tables.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace evgap {

namespace {

constexpr const char* kCumulative = "Cumulative 2027-2032";

Cell num(double v) { return v; }
Cell text(std::string_view s) { return std::string(s); }
Cell yes_no(bool b) { return std::string(b ? "yes" : "no"); }

std::vector<std::string> year_columns(int first, int last) {
    std::vector<std::string> out;
    for (int y = first; y <= last; ++y) out.push_back(std::to_string(y));
    return out;
}

std::vector<std::string> chemistry_columns() {
    std::vector<std::string> out;
    for (ChemistryId c : kAllChemistries) out.emplace_back(to_string(c));
    return out;
}

std::string scenario_label(ScenarioKind k) { return std::string(display_name(k)); }

std::string fmt(const char* f, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ReportTable make(std::string id, std::string title, std::vector<std::string> columns) {
    ReportTable t;
    t.id = std::move(id);
    t.title = std::move(title);
    t.columns = std::move(columns);
    return t;
}

ReportTable t1_1(const Model& m) {
    const auto& f = m.inputs().scenario.fuel;
    auto t = make("T1.1", "Fuel assumptions and required EV share", {"Value"});
    t.add_row("Fuel emissions rate", "g CO2/MJ", 2).cells[0] = f.fuel_emissions_rate;
    t.add_row("ICEV fuel economy", "mpg", 2).cells[0] = f.icev_mpg;
    t.add_row("HEV fuel economy", "mpg", 2).cells[0] = f.hev_mpg;
    t.add_row("Gasoline energy content", "MJ/gal", 5).cells[0] = f.gasoline_energy;
    t.add_row("ICEV tailpipe emissions", "g CO2/mi", 2).cells[0] = f.tailpipe_gpm();
    t.add_row("Tailpipe target", "g CO2/mi", 2).cells[0] = f.target_gpm;
    t.add_row("Required EV share", "%", 2).cells[0] = m.target_share() * 100.0;
    return t;
}

ReportTable t1_2(const Model& m, const TableOptions& opt) {
    const auto& sc = m.inputs().scenario;
    auto cols = year_columns(sc.shape.first_year, sc.shape.target_year);
    cols.emplace_back(kCumulative);
    auto t = make("T1.2", "EV sales projections", cols);
    const std::size_t n = cols.size() - 1;
    auto& total = t.add_row("Total new car sales", "vehicles");
    std::int64_t window = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = sc.shape.first_year + static_cast<int>(i);
        total.cells[i] = num(static_cast<double>(at_year(sc.total_sales, y, "total_sales")));
        if (y >= kWindowFirst && y <= kWindowLast) window += sc.total_sales.at(y);
    }
    total.cells[n] = num(static_cast<double>(window));
    for (ScenarioKind k : opt.scenarios) {
        const auto& s = m.scenario(k);
        auto& share = t.add_row(scenario_label(k) + " EV share", "%", 2);
        for (std::size_t i = 0; i < n; ++i) share.cells[i] = s.ev_share.at(sc.shape.first_year + static_cast<int>(i)) * 100.0;
        auto& sales = t.add_row(scenario_label(k) + " EV sales", "vehicles");
        for (std::size_t i = 0; i < n; ++i) {
            sales.cells[i] = num(static_cast<double>(s.ev_sales.at(sc.shape.first_year + static_cast<int>(i))));
        }
        sales.cells[n] = num(static_cast<double>(s.ev_sales_between(kWindowFirst, kWindowLast)));
    }
    t.note(FootnoteKind::Note, "2022 share is 809,739 / 13,754,300 = 5.8872%, displayed as 5.89%.");
    t.note(FootnoteKind::Discrepancy,
           "Medium 2027 EV sales use 3,645,029; the emissions summary elsewhere prints 3,645,234.");
    return t;
}

double cumulative_sales(const Model& m, ScenarioKind k) {
    return static_cast<double>(m.scenario(k).ev_sales_between(kWindowFirst, kWindowLast));
}

ReportTable requirement_table(const Model& m, bool reserves) {
    const SupplyBasis basis = reserves ? SupplyBasis::Reserves : SupplyBasis::Production;
    std::vector<std::string> cols;
    for (ScenarioKind k : kAllScenarios) cols.push_back("Requirement (" + scenario_label(k) + ")");
    std::vector<SourceKind> kinds;
    if (reserves) {
        cols.insert(cols.end(), {"US reserves", "Allies reserves"});
        kinds = {SourceKind::UsMining, SourceKind::AllyMining};
    } else {
        cols.insert(cols.end(), {"US mining", "US mining + recycling", "Allies mining"});
    }
    auto t = reserves ? make("T2.2", "Mineral reserve estimates", cols)
                      : make("T2.1", "Mineral production estimates", cols);
    const auto& nmc811 = m.intensities(FleetKind::Sedan)[kReferenceEv];
    const auto us_mine = supply_by_kind(m.inputs().supply, basis, SourceKind::UsMining);
    const auto us_rec = supply_by_kind(m.inputs().supply, basis, SourceKind::UsRecycling);
    const auto ally = supply_by_kind(m.inputs().supply, basis, SourceKind::AllyMining);
    for (MineralId mi : kAllMinerals) {
        auto& r = t.add_row(std::string(display_name(mi)), reserves ? "t" : "t/yr");
        for (std::size_t i = 0; i < 3; ++i) {
            const double evs = cumulative_sales(m, kAllScenarios[i]) / (reserves ? 1.0 : 6.0);
            r.cells[i] = round_requirement(nmc811.content[mi] * evs / 1000.0);
        }
        if (reserves) {
            r.cells[3] = us_mine[mi].value();
            r.cells[4] = ally[mi].value();
        } else {
            Tonnes both = us_mine[mi];
            both += us_rec[mi];
            r.cells[3] = us_mine[mi].value();
            r.cells[4] = both.value();
            r.cells[5] = ally[mi].value();
        }
    }
    t.note(FootnoteKind::Note, reserves ? "Requirements: NMC811-only cumulative 2027-2032 demand."
                                        : "Requirements: NMC811-only average annual demand over 2027-2032.");
    t.note(FootnoteKind::Note, "Requirements are rounded to 3 significant figures, never finer than 1,000 t.");
    t.note(FootnoteKind::Note, "Aluminum includes bauxite records converted at 4 t bauxite per t aluminum.");
    return t;
}

void intensity_rows(ReportTable& t, const IntensityTable& table, bool with_bounds) {
    for (MineralId mi : kAllMinerals) {
        auto& r = t.add_row(std::string(display_name(mi)), "kg/pack", 2);
        for (ChemistryId c : kAllChemistries) r.cells[static_cast<std::size_t>(c)] = table[c].content[mi];
        if (with_bounds) {
            if (const auto& b = table[ChemistryId::NMC111].bounds[mi]) {
                r.cells[6] = b->low;
                r.cells[7] = b->high;
            }
        }
    }
}

ReportTable t3_1(const Model& m) {
    auto cols = chemistry_columns();
    cols.insert(cols.end(), {"NMC111 low", "NMC111 high"});
    auto t = make("T3.1", "Mineral content per sedan pack (75 kWh)", cols);
    intensity_rows(t, m.intensities(FleetKind::Sedan), true);
    t.note(FootnoteKind::Note, "NMC111 content is the mean of the low and high bounds.");
    t.note(FootnoteKind::Discrepancy,
           "Contents carry more precision than the 2-decimal reference values so that ceilings agree within 0.1%.");
    return t;
}

ReportTable t3_3(const Model& m) {
    const auto& mix = m.inputs().mix;
    const int first = mix.shares.begin()->first;
    const int last = mix.shares.rbegin()->first;
    auto t = make("T3.3", "Market share by chemistry", year_columns(first, last));
    for (ChemistryId c : kAllChemistries) {
        auto& r = t.add_row(std::string(to_string(c)), "%", 2);
        for (int y = first; y <= last; ++y) r.cells[static_cast<std::size_t>(y - first)] = mix.at(y)[c] * 100.0;
    }
    auto& tot = t.add_row("Total", "%", 2);
    for (int y = first; y <= last; ++y) tot.cells[static_cast<std::size_t>(y - first)] = mix.total(y) * 100.0;
    t.note(FootnoteKind::Discrepancy,
           "Shares are fitted to the demand tables within 0.05 points of the printed shares; 2030-2032 sum to "
           "less than 100%, the remainder being chemistries outside the model.");
    return t;
}

ReportTable demand_table(const Model& m, ScenarioKind k) {
    static const char* ids[] = {"T3.4", "T3.5", "T3.6"};
    const auto& mix = m.inputs().mix;
    const int first = mix.shares.begin()->first;
    const int last = mix.shares.rbegin()->first;
    auto cols = year_columns(first, last);
    cols.emplace_back("Annual average");
    auto t = make(ids[static_cast<int>(k)], "Mineral demand, market mix, " + to_lower(display_name(k)) + " sales",
                  cols);
    const DemandTable d = mix_demand(m.scenario(k), mix, m.intensities(FleetKind::Sedan), first, last);
    const auto avg = d.annual_average();
    for (MineralId mi : kAllMinerals) {
        auto& r = t.add_row(std::string(display_name(mi)), "t");
        for (int y = first; y <= last; ++y) r.cells[static_cast<std::size_t>(y - first)] = d.tonnes.at(y)[mi];
        r.cells.back() = avg[mi];
    }
    return t;
}

ReportTable t4_1(const Model& m) {
    auto t = make("T4.1", "Annual supply under the added supply assumption",
                  {"Top producer", "Annual supply", "Added supply", "Annual supply (added supply)"});
    t.column_units = {"", "t/yr", "t/yr", "t/yr"};
    const auto& base = m.supply(Assumption::Baseline).production;
    const auto& added = m.supply(Assumption::AddedSupply).production;
    for (MineralId mi : kAllMinerals) {
        auto& r = t.add_row(std::string(display_name(mi)), "");
        r.cells = {text(m.inputs().added.top_producer[mi]), base[mi].value(), m.inputs().added.additions[mi].value(),
                   added[mi].value()};
    }
    t.note(FootnoteKind::Note, "Addition is 20% of the top producer's 2022 output; graphite counts natural graphite only.");
    return t;
}

ReportTable t4_3(const Model& m) {
    auto t = make("T4.3", "Requisite mineral intensity for 2032 desired EVs", {"Current production", "Added supply"});
    const double desired = static_cast<double>(m.scenario(ScenarioKind::Low).ev_sales.at(kWindowLast));
    const auto& ref = m.intensities(FleetKind::Sedan)[kReferenceEv];
    const DownsizeResult cur = downsize(m.supply_kg(SupplyBasis::Production, Assumption::Baseline), desired, ref);
    const DownsizeResult add = downsize(m.supply_kg(SupplyBasis::Production, Assumption::AddedSupply), desired, ref);
    for (MineralId mi : kAllMinerals) {
        auto& r = t.add_row(std::string(display_name(mi)), "kg/vehicle", 2);
        r.cells = {cur.intensity[mi], add.intensity[mi]};
    }
    auto& b = t.add_row("Binding mineral", "");
    b.cells = {text(display_name(cur.binding_mineral)), text(display_name(add.binding_mineral))};
    auto& p = t.add_row("Implied pack", "kWh", 1);
    p.cells = {cur.implied_pack_kwh, add.implied_pack_kwh};
    t.note(FootnoteKind::Note, "Implied pack: NMC811 pack capacity scaled by binding-mineral intensity.");
    t.note(FootnoteKind::OpenQuestion, "Added supply implied pack is " + fmt("%.1f", add.implied_pack_kwh) +
                                           " kWh; the reference text states 48 kWh.");
    return t;
}

ReportTable t4_4(const Model& m) {
    auto t = make("T4.4", "Fleet-weighted mineral content per pack", chemistry_columns());
    intensity_rows(t, m.intensities(FleetKind::Mixed), false);
    const auto& f = m.inputs().fleet;
    t.note(FootnoteKind::Note, fmt("%.0f%% sedans at 75 kWh, ", f.sedan_fraction * 100.0) +
                                   fmt("%.0f%% trucks and SUVs at ", f.truck_fraction * 100.0) +
                                   fmt("%.0f kWh.", f.truck_pack_kwh));
    return t;
}

ReportTable t5_1(const Model& m) {
    const int year = 2023;
    auto t = make("T5.1", "Emissions benefit relative to ICEVs, 2023",
                  {"Per-mile emissions", "Lifecycle emissions", "Benefit vs ICEV"});
    t.column_units = {"g CO2e/mi", "t CO2e/vehicle", "t CO2e/vehicle"};
    std::vector<Powertrain> pts{Powertrain::icev(), Powertrain::hev()};
    for (ChemistryId c : kAllChemistries) pts.push_back(Powertrain::ev(c));
    for (const auto& p : pts) {
        const auto r = lifecycle(m.emission_params(), m.trajectories(), p, year);
        auto& row = t.add_row(p.label(), "", 2);
        row.cells = {r.per_mile, r.per_vehicle, p.kind == PowertrainKind::Icev ? text("-") : num(r.benefit_vs_icev)};
    }
    t.note(FootnoteKind::Extrapolated, "EV LFP row has no printed counterpart; its manufacturing term is fitted to 2027-2032 values.");
    return t;
}

ReportTable t5_2(const Model& m) {
    auto t = make("T5.2", "Lifecycle emissions by powertrain and chemistry", year_columns(kWindowFirst, kWindowLast));
    const auto& tr = m.trajectories();
    const auto& p = m.emission_params();
    auto series = [&](std::string label, std::string unit, int dec, auto fn) {
        auto& r = t.add_row(std::move(label), std::move(unit), dec);
        for (int y = kWindowFirst; y <= kWindowLast; ++y) r.cells[static_cast<std::size_t>(y - kWindowFirst)] = fn(y);
    };
    series("ICEV fuel economy", "mpg", 2, [&](int y) { return tr.icev_mpg.at(y); });
    series("HEV fuel economy", "mpg", 2, [&](int y) { return tr.hev_economy(y); });
    series("EV fuel economy", "MPGe", 0, [&](int y) { return tr.ev_mpge.at(y); });
    series("Grid emissions rate", "g CO2e/kWh", 2, [&](int y) { return tr.grid_rate.at(y); });
    std::vector<Powertrain> pts{Powertrain::icev(), Powertrain::hev()};
    for (ChemistryId c : kAllChemistries) pts.push_back(Powertrain::ev(c));
    for (const auto& pt : pts) {
        series("Lifecycle " + pt.label(), "t CO2e/vehicle", 2,
               [&](int y) { return lifecycle(p, tr, pt, y).per_vehicle; });
    }
    series("Lifecycle EV weighted average", "t CO2e/vehicle", 2,
           [&](int y) { return mix_weighted_ev_lifecycle(p, tr, m.inputs().mix, y); });
    t.note(FootnoteKind::OpenQuestion, "Weighted average uses same-year market shares normalised to their sum.");
    t.note(FootnoteKind::Discrepancy,
           "EV lifecycle slope in grid rate follows the per-mile formula; later-year EV values differ from the "
           "printed ones by up to 0.6%.");
    return t;
}

ReportTable t5_3(const Model& m, const TableOptions& opt) {
    auto cols = year_columns(kWindowFirst, kWindowLast);
    cols.emplace_back("Total");
    auto t = make("T5.3", "EV sales scenarios and emissions shortfall", cols);
    const std::size_t n = cols.size() - 1;
    const auto& sales = m.inputs().scenario.total_sales;
    auto& ld = t.add_row("Projected light-duty sales", "vehicles");
    double ld_total = 0.0;
    for (int y = kWindowFirst; y <= kWindowLast; ++y) {
        const double v = static_cast<double>(sales.at(y));
        ld.cells[static_cast<std::size_t>(y - kWindowFirst)] = v;
        ld_total += v;
    }
    ld.cells[n] = ld_total;
    const auto possible = m.optimal_ceilings(Assumption::Baseline, FleetKind::Sedan);
    const auto best = optimal_chemistry(m.supply_kg(SupplyBasis::Production, Assumption::Baseline),
                                        m.intensities(FleetKind::Sedan)).first;
    const auto benefits = m.benefits();
    for (ScenarioKind k : opt.scenarios) {
        const auto summary = compute_shortfall(m.scenario(k), possible);
        const auto em = emissions_shortfall(summary.records, benefits.ev);
        const std::string s = scenario_label(k);
        auto& d = t.add_row(s + " EVs desired", "vehicles");
        auto& p = t.add_row(s + " EVs possible", "vehicles");
        auto& c = t.add_row(s + " optimal chemistry", "");
        auto& e = t.add_row(s + " emissions shortfall", "t CO2e");
        for (const auto& r : summary.records) {
            const auto i = static_cast<std::size_t>(r.year - kWindowFirst);
            d.cells[i] = num(static_cast<double>(r.desired_evs));
            p.cells[i] = num(static_cast<double>(r.possible_evs));
            c.cells[i] = text(to_string(best));
            e.cells[i] = em.per_year.at(r.year);
        }
        d.cells[n] = num(static_cast<double>(summary.desired_total));
        p.cells[n] = num(static_cast<double>(summary.possible_total));
        e.cells[n] = em.aggregate;
    }
    t.note(FootnoteKind::Note, "Shortfall = max(0, desired - possible) x NMC811 benefit vs ICEV.");
    t.note(FootnoteKind::Discrepancy, "Medium 2027 desired EVs printed as 3,645,234; the sales projection gives 3,645,029.");
    return t;
}

std::vector<ProductionThreshold> market_mix_thresholds(const Model& m) {
    const double target = static_cast<double>(m.scenario(ScenarioKind::Low).ev_sales.at(kWindowLast));
    return mix_production_thresholds(target, m.supply(Assumption::Baseline).production, m.inputs().mix,
                                     m.intensities(FleetKind::Sedan), kWindowFirst, kWindowLast);
}

ReportTable t6_1(const Model& m) {
    auto t = make("T6.1", "Current production and required production under the market mix",
                  {"Current production", "Minimum desired", "Maximum desired", "Multiplier", "Exceeds current"});
    t.column_units = {"t/yr", "t/yr", "t/yr", "x", ""};
    t.column_decimals = {-1, -1, -1, 2, -1};
    for (const auto& th : market_mix_thresholds(m)) {
        auto& r = t.add_row(std::string(display_name(th.mineral)), "");
        r.cells = {th.current, th.required_min, th.required_max, th.multiplier,
                   yes_no(th.exceeds_current)};
    }
    t.note(FootnoteKind::Note, "Required = target / per-mineral market-mix ceiling x current supply, over 2027-2032.");
    t.note(FootnoteKind::OpenQuestion,
           "Printed graphite minimum (431,520) and cobalt maximum (31,174) match no single-year market mix.");
    return t;
}

ReportTable t6_2(const Model& m) {
    const auto& ramp = m.inputs().ramp.schedule;
    const int first = ramp.begin()->first;
    const int last = ramp.rbegin()->first;
    auto t = make("T6.2", "Announced graphite production ramp", year_columns(first, last));
    double required = 0.0;
    for (const auto& th : market_mix_thresholds(m)) {
        if (th.mineral == MineralId::Graphite) required = th.required_max;
    }
    const auto ok = ramp_sufficiency(m.inputs().ramp, required);
    auto& prod = t.add_row("Annual graphite production", "million kg", 2);
    auto& req = t.add_row("Required graphite", "million kg", 2);
    auto& suff = t.add_row("Sufficient", "");
    for (int y = first; y <= last; ++y) {
        const auto i = static_cast<std::size_t>(y - first);
        prod.cells[i] = ramp.at(y) / 1000.0;
        req.cells[i] = required / 1000.0;
        suff.cells[i] = yes_no(ok.at(y));
    }
    return t;
}

ReportTable added_supply_ceilings(const Model& m, FleetKind f) {
    auto cols = year_columns(kWindowFirst, kWindowLast);
    cols.emplace_back(kCumulative);
    auto t = f == FleetKind::Sedan
                 ? make("T6.3", "EV batteries under the added supply assumption", cols)
                 : make("T6.4", "EV batteries under the heavier fleet and added supply assumptions", cols);
    const std::size_t n = cols.size() - 1;
    auto& opt = t.add_row("Optimal chemistry", "packs/yr");
    auto& mix = t.add_row("Market mix", "packs/yr");
    double a = 0.0;
    double b = 0.0;
    const auto o = m.optimal_ceilings(Assumption::AddedSupply, f);
    const auto x = m.mix_ceilings(Assumption::AddedSupply, f);
    for (int y = kWindowFirst; y <= kWindowLast; ++y) {
        const auto i = static_cast<std::size_t>(y - kWindowFirst);
        opt.cells[i] = num(static_cast<double>(o.at(y)));
        mix.cells[i] = num(static_cast<double>(x.at(y).packs));
        a += static_cast<double>(o.at(y));
        b += static_cast<double>(x.at(y).packs);
    }
    opt.cells[n] = a;
    mix.cells[n] = b;
    opt.unit = mix.unit = "packs/yr";
    t.note(FootnoteKind::Note, "Cumulative column in packs.");
    return t;
}

ReportTable t6_5(const Model& m) {
    auto t = make("T6.5", "Emissions benefit of replacing an ICEV", year_columns(2023, kWindowLast));
    std::vector<Powertrain> pts;
    for (ChemistryId c : kAllChemistries) pts.push_back(Powertrain::ev(c));
    pts.push_back(Powertrain::hev());
    for (const auto& p : pts) {
        auto& r = t.add_row(p.kind == PowertrainKind::Ev ? std::string(to_string(p.chemistry)) : p.label(),
                            "t CO2e/vehicle", 2);
        for (int y = 2023; y <= kWindowLast; ++y) {
            r.cells[static_cast<std::size_t>(y - 2023)] =
                lifecycle(m.emission_params(), m.trajectories(), p, y).benefit_vs_icev;
        }
    }
    return t;
}

ReportTable t6_6(const Model& m, const TableOptions& opt) {
    auto cols = year_columns(kWindowFirst, kWindowLast);
    cols.emplace_back("Total");
    auto t = make("T6.6", "Desired HEVs and projected light-duty sales", cols);
    const std::size_t n = cols.size() - 1;
    const auto& sales = m.inputs().scenario.total_sales;
    auto& ld = t.add_row("Projected light-duty sales", "vehicles");
    double ld_total = 0.0;
    for (int y = kWindowFirst; y <= kWindowLast; ++y) {
        ld.cells[static_cast<std::size_t>(y - kWindowFirst)] = static_cast<double>(sales.at(y));
        ld_total += static_cast<double>(sales.at(y));
    }
    ld.cells[n] = ld_total;
    const auto benefits = m.benefits();
    std::vector<HevRequirement> reqs;
    for (ScenarioKind k : opt.scenarios) {
        const auto req = hev_only_requirement(m.scenario(k), benefits, kWindowFirst, kWindowLast);
        auto& r = t.add_row("Desired HEVs (" + scenario_label(k) + ")", "vehicles");
        double total = 0.0;
        bool complete = true;
        for (int y = kWindowFirst; y <= kWindowLast; ++y) {
            const auto i = static_cast<std::size_t>(y - kWindowFirst);
            if (const auto& v = req.desired_hevs.at(y)) {
                r.cells[i] = *v;
                total += *v;
            } else {
                r.cells[i] = text("infeasible");
                complete = false;
            }
        }
        if (complete) r.cells[n] = total;
        reqs.push_back(req);
    }
    for (std::size_t s = 0; s < opt.scenarios.size(); ++s) {
        auto& r = t.add_row("Exceeds sales (" + scenario_label(opt.scenarios[s]) + ")", "");
        for (int y = kWindowFirst; y <= kWindowLast; ++y) {
            r.cells[static_cast<std::size_t>(y - kWindowFirst)] = yes_no(reqs[s].exceeds_sales.at(y));
        }
    }
    t.note(FootnoteKind::Note, "Desired HEVs = desired EVs x NMC811 benefit / HEV benefit.");
    return t;
}

ReportTable t6_7(const Model& m, const TableOptions& opt) {
    auto t = make("T6.7", "Minimum EVs required to supplement HEVs", year_columns(kWindowFirst, kWindowLast));
    const auto benefits = m.benefits();
    std::vector<std::string> flagged;
    std::vector<std::pair<ScenarioKind, YearMap<SupplementCell>>> all;
    for (ScenarioKind k : opt.scenarios) {
        all.emplace_back(k, min_ev_supplement(m.scenario(k), benefits, m.scenario(k).total_sales, kWindowFirst,
                                              kWindowLast));
    }
    for (const auto& [k, cells] : all) {
        auto& r = t.add_row("Minimum EVs (" + scenario_label(k) + ")", "vehicles");
        for (const auto& [y, c] : cells) {
            const auto i = static_cast<std::size_t>(y - kWindowFirst);
            r.cells[i] = c.min_evs ? num(*c.min_evs) : text("degenerate");
            if (c.ill_conditioned && c.min_evs && !c.clamped) {
                flagged.push_back(scenario_label(k) + " " + std::to_string(y) + fmt(" (condition %.0f)", c.condition));
            }
        }
    }
    for (const auto& [k, cells] : all) {
        auto& r = t.add_row("Condition number (" + scenario_label(k) + ")", "ratio", 2);
        for (const auto& [y, c] : cells) r.cells[static_cast<std::size_t>(y - kWindowFirst)] = c.condition;
    }
    for (const auto& [k, cells] : all) {
        auto& r = t.add_row("Substitution residual (" + scenario_label(k) + ")", "relative", 12);
        for (const auto& [y, c] : cells) {
            r.cells[static_cast<std::size_t>(y - kWindowFirst)] = c.clamped ? text("clamped") : num(c.residual);
        }
    }
    t.note(FootnoteKind::Note, "EV_t = clamp((EB_desired - LD x EB_HEV) / (EB_EV - EB_HEV), 0, LD).");
    for (const auto& f : flagged) {
        t.note(FootnoteKind::Discrepancy, "Ill-conditioned cell " + f + ": small benefit differences move it by large factors.");
    }
    return t;
}

ReportTable res(const Model& m) {
    auto t = make("RES", "Headline capacity figures", {"Value"});
    const auto reserves = m.supply_kg(SupplyBasis::Reserves, Assumption::Baseline);
    const auto& sedan = m.intensities(FleetKind::Sedan);
    for (ChemistryId c : kAllChemistries) {
        t.add_row("Reserve ceiling " + std::string(to_string(c)), "packs").cells[0] =
            num(static_cast<double>(chemistry_ceiling(reserves, sedan[c]).ceiling));
    }
    const std::vector<ChemistryId> pair{ChemistryId::LFP, ChemistryId::NCA};
    const auto joint = joint_allocation(reserves, sedan, pair);
    t.add_row("Joint LFP+NCA reserves: LFP", "packs").cells[0] =
        num(static_cast<double>(joint.whole_packs[ChemistryId::LFP]));
    t.add_row("Joint LFP+NCA reserves: NCA", "packs").cells[0] =
        num(static_cast<double>(joint.whole_packs[ChemistryId::NCA]));
    t.add_row("Joint LFP+NCA reserves: total", "packs").cells[0] = num(static_cast<double>(joint.total_whole_packs));
    auto mix_cum = [&](FleetKind f) {
        double s = 0.0;
        for (const auto& [y, c] : m.mix_ceilings(Assumption::Baseline, f)) s += static_cast<double>(c.packs);
        return s;
    };
    t.add_row("Market mix cumulative 2027-2032, current production", "packs").cells[0] = mix_cum(FleetKind::Sedan);
    t.add_row("Heavier fleet market mix cumulative 2027-2032, current production", "packs").cells[0] =
        mix_cum(FleetKind::Mixed);
    return t;
}

}  // namespace

double round_requirement(double tonnes) {
    if (tonnes == 0.0) return 0.0;
    const double mag = std::pow(10.0, std::floor(std::log10(std::abs(tonnes))) - 2.0);
    const double three = std::round(tonnes / mag) * mag;
    return std::round(three / 1000.0) * 1000.0;
}

PerMineral<Tonnes> supply_by_kind(const SupplyTable& s, SupplyBasis b, SourceKind k) {
    PerMineral<Tonnes> out{};
    for (const auto& r : s.provenance) {
        if (r.basis == b && r.source_kind == k) out[r.mineral] += r.contribution();
    }
    return out;
}

ReportTable capacity_table(std::string id, std::string title, const PerMineral<double>& supply_kg,
                           const IntensityTable& table, bool annual) {
    const std::string unit = annual ? "packs/yr" : "packs";
    auto t = make(std::move(id), std::move(title), chemistry_columns());
    PerChemistry<CapacityResult> res{};
    for (ChemistryId c : kAllChemistries) res[c] = chemistry_ceiling(supply_kg, table[c]);
    for (MineralId mi : kAllMinerals) {
        auto& r = t.add_row(std::string(display_name(mi)), unit);
        for (ChemistryId c : kAllChemistries) {
            const auto& v = res[c].per_mineral_ceiling[mi];
            r.cells[static_cast<std::size_t>(c)] = v ? num(static_cast<double>(*v)) : text("n/a");
        }
    }
    auto& lim = t.add_row("Limiting mineral", "");
    auto& ceil = t.add_row("Ceiling", unit);
    for (ChemistryId c : kAllChemistries) {
        const auto i = static_cast<std::size_t>(c);
        lim.cells[i] = text(display_name(res[c].limiting_mineral));
        ceil.cells[i] = num(static_cast<double>(res[c].ceiling));
    }
    if (annual) {
        auto& cum = t.add_row(kCumulative, "packs");
        for (ChemistryId c : kAllChemistries) {
            cum.cells[static_cast<std::size_t>(c)] =
                num(static_cast<double>(res[c].ceiling) * (kWindowLast - kWindowFirst + 1));
        }
    }
    const auto best = optimal_chemistry(supply_kg, table);
    t.note(FootnoteKind::Note, "Optimal chemistry: " + std::string(to_string(best.first)) + " at " +
                                   format_number(static_cast<double>(best.second.ceiling), 0, true) + " " + unit + ".");
    return t;
}

const std::vector<std::string>& reference_table_ids() {
    static const std::vector<std::string> ids{"T1.1", "T1.2", "T2.1", "T2.2", "T3.1", "T3.2", "T3.3", "T3.4", "T3.5",
                                              "T3.6", "T4.1", "T4.2", "T4.3", "T4.4", "T4.5", "T4.6", "T5.1", "T5.2",
                                              "T5.3", "T6.1", "T6.2", "T6.3", "T6.4", "T6.5", "T6.6", "T6.7", "RES"};
    return ids;
}

ReportTable build_table(const Model& m, std::string_view id_in, const TableOptions& opt) {
    const std::string id = [&] {
        std::string s = trim(id_in);
        for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }();
    const auto prod = [&](Assumption a) { return m.supply_kg(SupplyBasis::Production, a); };
    if (id == "T1.1") return t1_1(m);
    if (id == "T1.2") return t1_2(m, opt);
    if (id == "T2.1") return requirement_table(m, false);
    if (id == "T2.2") return requirement_table(m, true);
    if (id == "T3.1") return t3_1(m);
    if (id == "T3.2") {
        return capacity_table("T3.2", "EV batteries per chemistry, current production", prod(Assumption::Baseline),
                              m.intensities(FleetKind::Sedan));
    }
    if (id == "T3.3") return t3_3(m);
    if (id == "T3.4") return demand_table(m, ScenarioKind::Low);
    if (id == "T3.5") return demand_table(m, ScenarioKind::Medium);
    if (id == "T3.6") return demand_table(m, ScenarioKind::High);
    if (id == "T4.1") return t4_1(m);
    if (id == "T4.2") {
        return capacity_table("T4.2", "EV batteries per chemistry, added supply", prod(Assumption::AddedSupply),
                              m.intensities(FleetKind::Sedan));
    }
    if (id == "T4.3") return t4_3(m);
    if (id == "T4.4") return t4_4(m);
    if (id == "T4.5") {
        return capacity_table("T4.5", "EV batteries per chemistry, heavier fleet, current production",
                              prod(Assumption::Baseline), m.intensities(FleetKind::Mixed));
    }
    if (id == "T4.6") {
        return capacity_table("T4.6", "EV batteries per chemistry, heavier fleet, added supply",
                              prod(Assumption::AddedSupply), m.intensities(FleetKind::Mixed));
    }
    if (id == "T5.1") return t5_1(m);
    if (id == "T5.2") return t5_2(m);
    if (id == "T5.3") return t5_3(m, opt);
    if (id == "T6.1") return t6_1(m);
    if (id == "T6.2") return t6_2(m);
    if (id == "T6.3") return added_supply_ceilings(m, FleetKind::Sedan);
    if (id == "T6.4") return added_supply_ceilings(m, FleetKind::Mixed);
    if (id == "T6.5") return t6_5(m);
    if (id == "T6.6") return t6_6(m, opt);
    if (id == "T6.7") return t6_7(m, opt);
    if (id == "RES") return res(m);
    throw std::invalid_argument("unknown table id '" + std::string(id_in) + "'");
}

ReportBundle build_tables(const Model& m, std::span<const std::string> ids, const TableOptions& opt) {
    ReportBundle b;
    for (const auto& id : ids) b.tables.push_back(build_table(m, id, opt));
    return b;
}

ToleranceBook reference_tolerances() {
    const Tolerance exact = Tolerance::exact();
    const Tolerance rel01 = Tolerance::relative(0.001);
    const Tolerance rel05 = Tolerance::relative(0.005);
    const Tolerance rel1 = Tolerance::relative(0.01);
    const Tolerance rel2 = Tolerance::relative(0.02);
    ToleranceBook b;
    b["T1.1"] = {exact, {{"Required EV share", "", Tolerance::absolute(0.05)}}, {}, {}};
    b["T1.2"] = {rel01, {{"Total new car sales", "", exact}}, {}, {}};
    for (ScenarioKind k : kAllScenarios) {
        b["T1.2"].rules.push_back({scenario_label(k) + " EV share", "", Tolerance::absolute(0.01)});
    }
    b["T2.1"] = {exact, {}, {}, {}};
    b["T2.2"] = {exact, {}, {}, {}};
    b["T3.1"] = {Tolerance::absolute(0.01), {}, {}, {}};
    b["T3.2"] = {rel01, {{"Limiting mineral", "", exact}}, {}, {}};
    b["T3.3"] = {Tolerance::absolute(0.05), {}, {}, {}};
    b["T3.4"] = b["T3.5"] = b["T3.6"] = {rel01, {}, {}, {}};
    b["T4.1"] = {exact, {}, {}, {}};
    b["T4.2"] = {rel01, {}, {}, {}};
    b["T4.3"] = {Tolerance::absolute(0.01),
                 {{"Implied pack", "", Tolerance::absolute(1.0)}},
                 {{"Implied pack", "Added supply", "reference figure of 48 kWh is an open question"}},
                 {}};
    b["T4.4"] = {Tolerance::absolute(0.01), {}, {}, {}};
    b["T4.5"] = b["T4.6"] = {rel01, {{kCumulative, "", rel05}}, {}, {}};
    b["T5.1"] = b["T5.2"] = {rel1, {}, {}, {}};
    b["T5.3"] = {rel1, {{"Low emissions shortfall", "Total", rel2}}, {}, {}};
    b["T6.1"] = {rel2,
                 {{"", "Current production", exact}},
                 {{"Graphite", "Minimum desired", "printed minimum matches no single-year market mix"},
                  {"Cobalt", "Maximum desired", "printed maximum matches no single-year market mix"}},
                 {}};
    b["T6.2"] = {exact, {}, {}, {}};
    b["T6.3"] = b["T6.4"] = {rel01, {{"", kCumulative, rel05}}, {}, {}};
    b["T6.5"] = {rel1, {}, {}, {}};
    b["T6.6"] = {rel2, {}, {}, {}};
    ConditionScaling cs;
    for (ScenarioKind k : kAllScenarios) {
        cs.condition_rows["Minimum EVs (" + scenario_label(k) + ")"] = "Condition number (" + scenario_label(k) + ")";
    }
    b["T6.7"] = {rel2, {}, {}, cs};
    b["RES"] = {rel05, {}, {}, {}};
    return b;
}

}  // namespace evgap
