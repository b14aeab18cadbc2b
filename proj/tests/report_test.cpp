#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "evgap/csv.hpp"
#include "evgap/reference_tables.hpp"
#include "evgap/report.hpp"
#include "support.hpp"

using namespace evgap;
using evgap::test::rel_err;
using evgap::test::shipped;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GoldenTable load_golden(const std::string& id) {
    const auto path = evgap::test::data_dir() / "golden" / (id + ".csv");
    std::ifstream in(path);
    return read_golden(in, id, path.string());
}

GoldenTable as_golden(const ReportTable& t) {
    GoldenTable g;
    g.id = t.id;
    g.columns = t.columns;
    for (const auto& r : t.rows) g.rows.emplace_back(r.label, r.cells);
    return g;
}

const ReportBundle& all_tables() {
    static const ReportBundle b = build_tables(shipped(), reference_table_ids());
    return b;
}

double cell(const ReportTable& t, std::string_view row, std::string_view col) {
    const auto* r = t.find_row(row);
    REQUIRE(r != nullptr);
    const auto c = t.column_index(col);
    REQUIRE(c.has_value());
    return std::get<double>(r->cells[*c]);
}

// Ways a number can be printed in the reference text.
std::set<std::string> printed_forms(double v) {
    std::set<std::string> out;
    char buf[64];
    if (v == std::floor(v)) {
        out.insert(format_number(v, 0, true));
        out.insert(format_number(v, 0, false));
    }
    for (int d = 1; d <= 4; ++d) {
        out.insert(format_number(v, d, true));
        out.insert(format_number(v, d, false));
    }
    for (auto [scale, word] : {std::pair{1e6, " million"}, std::pair{1e9, " billion"}}) {
        for (int d = 1; d <= 2; ++d) {
            std::snprintf(buf, sizeof buf, "%.*f%s", d, v / scale, word);
            out.insert(buf);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(1234567.4, 0, true) == "1,234,567");
    CHECK(format_number(-1234.5, 1, true) == "-1,234.5");
    CHECK(format_number(-0.0001, 2, true) == "0.00");
    CHECK(format_number(999.995, 2, false) == "1000.00");
}

TEST_CASE("every reference table has a golden fixture and builds") {
    CHECK(reference_table_ids().size() == 27);
    for (const auto& id : reference_table_ids()) {
        CHECK_MESSAGE(std::filesystem::exists(evgap::test::data_dir() / "golden" / (id + ".csv")), id);
        CHECK(all_tables().find(id) != nullptr);
    }
    CHECK_THROWS_AS(build_table(shipped(), "T9.9"), std::invalid_argument);
    CHECK(build_table(shipped(), "t3.2").id == "T3.2");
}

TEST_CASE("golden cells are printed in the reference text") {
    const std::string printed = slurp(EVGAP_TEST_REFERENCE_TEXT);
    for (const auto& id : reference_table_ids()) {
        const auto g = load_golden(id);
        for (const auto& [label, cells] : g.rows) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const auto* v = std::get_if<double>(&cells[i]);
                if (!v || *v == 0.0) continue;
                // shortfall totals are sums of the printed cells, checked below
                if (id == "T5.3" && g.columns[i] == "Total") continue;
                bool found = false;
                for (const auto& f : printed_forms(*v)) found = found || printed.find(f) != std::string::npos;
                CHECK_MESSAGE(found, id, " ", label, " / ", g.columns[i], " = ", *v);
            }
        }
    }
}

TEST_CASE("shortfall totals equal the sum of the printed cells") {
    const auto g = load_golden("T5.3");
    const std::map<std::string, double> printed{{"Low emissions shortfall", 59'540'229},
                                                {"Medium emissions shortfall", 284'119'232},
                                                {"High emissions shortfall", 369'049'345}};
    for (const auto& [label, cells] : g.rows) {
        auto it = printed.find(label);
        if (it == printed.end()) continue;
        double sum = 0;
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) sum += std::get<double>(cells[i]);
        CHECK(sum == doctest::Approx(it->second).epsilon(1e-12));
        CHECK(std::get<double>(cells.back()) == it->second);
    }
    const auto* med = all_tables().find("T5.3");
    CHECK(rel_err(cell(*med, "Medium emissions shortfall", "Total"), 284.12e6) < 0.01);
    CHECK(rel_err(cell(*med, "Low emissions shortfall", "Total"), 59.54e6) < 0.02);
    CHECK(rel_err(cell(*med, "High emissions shortfall", "2027"), 67'232'948) < 0.01);
}

TEST_CASE("table 3.2 matches an independent recomputation") {
    // Supply totals printed in Table 2.1, tonnes
    const std::map<std::string, double> supply{
        {"lithium", 102'000},     {"cobalt", 21'800},      {"nickel", 933'000},      {"manganese", 3'530'000},
        {"graphite", 48'000},     {"aluminum", 26'524'000}, {"copper", 11'289'000}, {"phosphate", 84'950'000}};
    std::ifstream in(evgap::test::data_dir() / "chemistry_intensity.csv");
    std::string line;
    std::map<std::pair<std::string, std::string>, double> content;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::stringstream ss(line);
        std::string chem, mineral, kg;
        std::getline(ss, chem, ',');
        std::getline(ss, mineral, ',');
        std::getline(ss, kg, ',');
        content[{chem, mineral}] = std::stod(kg);
    }
    const auto* t = all_tables().find("T3.2");
    const auto g = load_golden("T3.2");
    for (const std::string chem : {"NMC111", "NMC523", "NMC622", "NMC811", "NCA", "LFP"}) {
        for (const auto& [mineral, tons] : supply) {
            const double kg = content.at({chem, mineral});
            std::string label = mineral;
            label[0] = static_cast<char>(std::toupper(label[0]));
            const auto* r = t->find_row(label);
            REQUIRE(r != nullptr);
            const auto& c = r->cells[*t->column_index(chem)];
            if (kg == 0.0) {
                CHECK(std::holds_alternative<std::string>(c));
                continue;
            }
            const double oracle = std::floor(tons * 1000.0 / kg);
            CHECK(std::get<double>(c) == oracle);
            for (const auto& [gl, gc] : g.rows) {
                if (gl != label) continue;
                const std::size_t i = static_cast<std::size_t>(
                    std::find(g.columns.begin(), g.columns.end(), chem) - g.columns.begin());
                if (const auto* e = std::get_if<double>(&gc[i])) CHECK(rel_err(oracle, *e) <= 0.001);
            }
        }
    }
}

TEST_CASE("golden diff of the shipped model") {
    const DiffReport rep = diff_against_golden(all_tables(), evgap::test::data_dir() / "golden", reference_tolerances());
    for (const auto& c : rep.cells) {
        CHECK_MESSAGE(c.status != CellStatus::Fail, c.table, " ", c.row, " / ", c.column, " dev ", c.deviation);
        CHECK(c.status != CellStatus::Missing);
        if (c.table == "T2.1" || c.table == "T2.2" || c.table == "T4.1") CHECK(c.deviation == 0.0);
        if (c.table == "T3.2" && c.tolerance != "exact") CHECK(std::abs(c.deviation) <= 0.001);
    }
    CHECK(rep.passed);
    const ReportTable s = rep.summary();
    CHECK(s.rows.size() == reference_table_ids().size());
}

TEST_CASE("a bundle diffed against itself shows no deviation") {
    for (const auto& t : all_tables().tables) {
        const DiffReport r = diff_table(t, as_golden(t), TablePolicy{Tolerance::exact(), {}, {}, {}});
        CHECK(r.passed);
        for (const auto& c : r.cells) CHECK(c.deviation == 0.0);
    }
}

TEST_CASE("diff tolerances, exemptions and conditioning") {
    ReportTable t;
    t.id = "X";
    t.columns = {"A", "B"};
    t.add_row("Value", "").cells = {100.0, 50.0};
    t.add_row("Condition number", "").cells = {50.0, 2.0};
    t.add_row("Name", "").cells = {std::string("NMC 811"), std::string("x")};
    GoldenTable g;
    g.id = "X";
    g.columns = {"A", "B"};
    g.rows.emplace_back("Value", std::vector<Cell>{250.0, 50.5});
    g.rows.emplace_back("Name", std::vector<Cell>{std::string("nmc811"), Cell{}});

    TablePolicy p;
    p.base = Tolerance::relative(0.02);
    ConditionScaling cs;
    cs.condition_rows["Value"] = "Condition number";
    p.conditioning = cs;
    DiffReport r = diff_table(t, g, p);
    REQUIRE(r.cells.size() == 3);
    CHECK(r.cells[0].status == CellStatus::Pass);  // 2.5x, condition 50
    CHECK(r.cells[1].status == CellStatus::Pass);  // 1%, floor 2%
    CHECK(r.cells[2].status == CellStatus::Pass);  // spacing and case ignored
    CHECK(r.passed);

    g.rows[0].second[0] = 400.0;  // 4x
    r = diff_table(t, g, p);
    CHECK(r.cells[0].status == CellStatus::Flagged);
    CHECK(r.passed);

    p.conditioning.reset();
    r = diff_table(t, g, p);
    CHECK(r.cells[0].status == CellStatus::Fail);
    CHECK_FALSE(r.passed);

    p.exemptions.push_back({"Value", "A", "known"});
    r = diff_table(t, g, p);
    CHECK(r.cells[0].status == CellStatus::Exempt);
    CHECK(r.passed);

    p.exemptions.clear();
    p.rules.push_back({"Val*", "A", Tolerance::absolute(300.0)});
    CHECK(diff_table(t, g, p).passed);
}

TEST_CASE("missing golden rows and files") {
    ReportTable t;
    t.id = "X";
    t.columns = {"A"};
    GoldenTable g;
    g.id = "X";
    g.columns = {"A"};
    g.rows.emplace_back("Absent", std::vector<Cell>{1.0});
    const auto r = diff_table(t, g, TablePolicy{});
    CHECK(r.cells[0].status == CellStatus::Missing);
    CHECK_FALSE(r.passed);

    ReportBundle b;
    b.tables.push_back(t);
    CHECK_THROWS_AS(diff_against_golden(b, evgap::test::data_dir() / "golden", ToleranceBook{}), DataError);
}

TEST_CASE("golden reader") {
    auto ok = evgap::test::text("# c\nlabel,a,b\nRow,1.5,\nName,NMC811,2\n");
    const auto g = read_golden(ok, "X", "x.csv");
    REQUIRE(g.rows.size() == 2);
    CHECK(std::get<double>(g.rows[0].second[0]) == 1.5);
    CHECK(std::holds_alternative<std::monostate>(g.rows[0].second[1]));
    CHECK(std::get<std::string>(g.rows[1].second[0]) == "NMC811");
    auto bad = evgap::test::text("row,a\nx,1\n");
    CHECK_THROWS_AS(read_golden(bad, "X", "x.csv"), DataError);
}

TEST_CASE("plot series") {
    const auto& b = all_tables();
    const std::string s63 = emit_plot_series(b, "T6.3");
    std::map<std::string, int> points;
    std::istringstream in(s63);
    std::string line;
    std::getline(in, line);
    CHECK(line == "series,x,y");
    while (std::getline(in, line)) points[line.substr(0, line.find(','))] += 1;
    CHECK(points.size() == 2);
    for (const auto& [name, n] : points) CHECK(n == 6);

    const auto* t35 = b.find("T3.5");
    CHECK(rel_err(cell(*t35, "Graphite", "2024"), 141'174) < 0.001);
    CHECK(rel_err(cell(*t35, "Graphite", "2032"), 472'625) < 0.001);
    const std::string s35 = emit_plot_series(b, "T3.5");
    CHECK(s35.find("T3.5/Graphite,2024,") != std::string::npos);
    CHECK(s35.find("T3.5/Graphite,2032,") != std::string::npos);
    CHECK(s35.find("Annual average") == std::string::npos);

    ReportBundle empty;
    empty.tables.push_back(ReportTable{"E", "empty", {}, {}, {}, {}, {}});
    CHECK(emit_plot_series(empty, "E").empty());
    CHECK_THROWS_AS(emit_plot_series(empty, "T6.3"), std::invalid_argument);
    CHECK(emit_plot_series(b, "T6.3") == s63);
}

TEST_CASE("structured output carries units and footnotes") {
    for (const auto& t : all_tables().tables) {
        const auto j = to_json(t);
        CHECK(j.at("table_id") == t.id);
        CHECK(j.contains("units"));
        CHECK(j.contains("footnotes"));
        REQUIRE(j.at("rows").size() == t.rows.size());
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = j.at("rows")[r];
            CHECK(row.at("values").size() == t.columns.size());
            CHECK(row.at("units").size() == t.columns.size());
        }
    }
    auto has_kind = [](const ReportTable* t, FootnoteKind k) {
        for (const auto& f : t->footnotes) {
            if (f.kind == k) return true;
        }
        return false;
    };
    CHECK(has_kind(all_tables().find("T4.3"), FootnoteKind::OpenQuestion));
    CHECK(has_kind(all_tables().find("T1.2"), FootnoteKind::Discrepancy));
    CHECK(has_kind(all_tables().find("T6.1"), FootnoteKind::OpenQuestion));
}

TEST_CASE("numeric cells carry units") {
    for (const auto& t : all_tables().tables) {
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.cells.size(); ++i) {
                if (!std::holds_alternative<double>(r.cells[i])) continue;
                CHECK_MESSAGE(!t.unit_of(r, i).empty(), t.id, " ", r.label, " / ", t.columns[i]);
            }
        }
    }
}

TEST_CASE("renderers") {
    const auto* t = all_tables().find("T3.2");
    const std::string csv = render_csv(*t);
    CHECK(csv.rfind("# T3.2:", 0) == 0);
    CHECK(csv.find("\nlabel,unit,NMC111,") != std::string::npos);
    CHECK(csv.find("Graphite,packs/yr,") != std::string::npos);
    const std::string human = render_human(*t);
    CHECK(human.find("848,804") != std::string::npos);
    ReportBundle b;
    b.tables.push_back(*t);
    const auto parsed = nlohmann::json::parse(render(b, OutputFormat::Json));
    CHECK(parsed.is_array());
    CHECK(parsed[0].at("table_id") == "T3.2");
    CHECK(parse_output_format("JSON") == OutputFormat::Json);
    CHECK_FALSE(parse_output_format("xml").has_value());
}
