#include "evgap/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evgap/core.hpp"
#include "evgap/csv.hpp"

namespace evgap {

std::string_view to_string(FootnoteKind k) {
    switch (k) {
        case FootnoteKind::Note: return "note";
        case FootnoteKind::Discrepancy: return "discrepancy";
        case FootnoteKind::OpenQuestion: return "open-question";
        case FootnoteKind::Extrapolated: return "extrapolated";
    }
    return "note";
}

std::string_view to_string(CellStatus s) {
    switch (s) {
        case CellStatus::Pass: return "pass";
        case CellStatus::Fail: return "FAIL";
        case CellStatus::Exempt: return "exempt";
        case CellStatus::Flagged: return "flagged";
        case CellStatus::Missing: return "MISSING";
    }
    return "?";
}

namespace {

std::string fold(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

bool same_label(std::string_view a, std::string_view b) { return to_lower(trim(a)) == to_lower(trim(b)); }

std::optional<int> year_of(std::string_view col) {
    if (col.size() != 4) return std::nullopt;
    int y = 0;
    auto [p, ec] = std::from_chars(col.data(), col.data() + 4, y);
    if (ec != std::errc() || p != col.data() + 4) return std::nullopt;
    return y;
}

std::string cell_text(const Cell& c, int decimals, bool separators) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d, decimals, separators);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return "";
}

}  // namespace

ReportRow& ReportTable::add_row(std::string label, std::string unit, int decimals) {
    ReportRow r;
    r.label = std::move(label);
    r.unit = std::move(unit);
    r.decimals = decimals;
    r.cells.assign(columns.size(), Cell{});
    rows.push_back(std::move(r));
    return rows.back();
}

const ReportRow* ReportTable::find_row(std::string_view label) const {
    for (const auto& r : rows) {
        if (same_label(r.label, label)) return &r;
    }
    return nullptr;
}

std::optional<std::size_t> ReportTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (same_label(columns[i], name)) return i;
    }
    return std::nullopt;
}

std::string ReportTable::unit_of(const ReportRow& row, std::size_t col) const {
    if (!row.unit.empty()) return row.unit;
    return col < column_units.size() ? column_units[col] : std::string{};
}

int ReportTable::decimals_of(const ReportRow& row, std::size_t col) const {
    if (col < column_decimals.size() && column_decimals[col] >= 0) return column_decimals[col];
    return row.decimals;
}

const ReportTable* ReportBundle::find(std::string_view id) const {
    for (const auto& t : tables) {
        if (same_label(t.id, id)) return &t;
    }
    return nullptr;
}

std::optional<OutputFormat> parse_output_format(std::string_view text) {
    const std::string key = to_lower(trim(text));
    if (key == "table" || key == "human") return OutputFormat::Human;
    if (key == "csv") return OutputFormat::Csv;
    if (key == "json") return OutputFormat::Json;
    if (key == "series") return OutputFormat::Series;
    return std::nullopt;
}

std::string format_number(double v, int decimals, bool separators) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    if (!separators) return s;
    const bool neg = s[0] == '-';
    const std::size_t start = neg ? 1 : 0;
    std::size_t end = s.find('.');
    if (end == std::string::npos) end = s.size();
    for (std::size_t i = end; i > start + 3; i -= 3) s.insert(i - 3, ",");
    return s;
}

std::string render_human(const ReportTable& t) {
    std::vector<std::string> head{"", "unit"};
    head.insert(head.end(), t.columns.begin(), t.columns.end());
    std::vector<std::vector<std::string>> grid{head};
    bool any_unit = false;
    for (const auto& r : t.rows) {
        std::vector<std::string> line{r.label, r.unit};
        any_unit = any_unit || !r.unit.empty();
        for (std::size_t i = 0; i < r.cells.size(); ++i) line.push_back(cell_text(r.cells[i], t.decimals_of(r, i), true));
        grid.push_back(std::move(line));
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& line : grid) {
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    std::ostringstream out;
    out << t.id << ": " << t.title << '\n';
    if (!t.column_units.empty()) {
        out << "units:";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? "; " : " ") << t.columns[i] << " [" << (i < t.column_units.size() ? t.column_units[i] : "")
                << "]";
        }
        out << '\n';
    }
    for (std::size_t li = 0; li < grid.size(); ++li) {
        const auto& line = grid[li];
        std::string text;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i == 1 && !any_unit) continue;
            const std::string& f = line[i];
            const std::size_t pad = width[i] - f.size();
            if (i == 0) {
                text += f + std::string(pad, ' ');
            } else {
                text += "  " + (i == 1 ? f + std::string(pad, ' ') : std::string(pad, ' ') + f);
            }
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out << text << '\n';
    }
    for (const auto& f : t.footnotes) out << "  [" << to_string(f.kind) << "] " << f.text << '\n';
    return out.str();
}

std::string render_csv(const ReportTable& t) {
    std::ostringstream out;
    out << "# " << t.id << ": " << t.title << '\n';
    out << "label,unit";
    for (const auto& c : t.columns) out << ',' << csv_escape(c);
    out << '\n';
    for (const auto& r : t.rows) {
        out << csv_escape(r.label) << ',' << csv_escape(r.unit.empty() && !t.column_units.empty() ? "" : r.unit);
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            out << ',' << csv_escape(cell_text(r.cells[i], t.decimals_of(r, i), false));
        }
        out << '\n';
    }
    if (!t.column_units.empty()) {
        out << "# units";
        for (const auto& u : t.column_units) out << ',' << csv_escape(u);
        out << '\n';
    }
    for (const auto& f : t.footnotes) out << "# [" << to_string(f.kind) << "] " << f.text << '\n';
    return out.str();
}

nlohmann::ordered_json to_json(const ReportTable& t) {
    nlohmann::ordered_json j;
    j["table_id"] = t.id;
    j["title"] = t.title;
    j["columns"] = t.columns;
    j["units"] = t.column_units;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json jr;
        jr["label"] = r.label;
        auto values = nlohmann::ordered_json::array();
        auto units = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            const Cell& c = r.cells[i];
            if (const auto* d = std::get_if<double>(&c)) {
                values.push_back(*d);
            } else if (const auto* s = std::get_if<std::string>(&c)) {
                values.push_back(*s);
            } else {
                values.push_back(nullptr);
            }
            units.push_back(t.unit_of(r, i));
        }
        jr["values"] = std::move(values);
        jr["units"] = std::move(units);
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    auto notes = nlohmann::ordered_json::array();
    for (const auto& f : t.footnotes) notes.push_back({{"kind", to_string(f.kind)}, {"text", f.text}});
    j["footnotes"] = std::move(notes);
    return j;
}

std::string render(const ReportBundle& b, OutputFormat f) {
    switch (f) {
        case OutputFormat::Json: {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& t : b.tables) arr.push_back(to_json(t));
            return arr.dump(2) + "\n";
        }
        case OutputFormat::Series: {
            std::string out;
            for (const auto& t : b.tables) {
                const std::string part = emit_plot_series(b, t.id);
                if (part.empty()) continue;
                out += out.empty() ? part : part.substr(part.find('\n') + 1);
            }
            return out;
        }
        case OutputFormat::Csv:
        case OutputFormat::Human: {
            std::string out;
            for (std::size_t i = 0; i < b.tables.size(); ++i) {
                if (i) out += '\n';
                out += f == OutputFormat::Csv ? render_csv(b.tables[i]) : render_human(b.tables[i]);
            }
            return out;
        }
    }
    return {};
}

std::string emit_plot_series(const ReportBundle& b, std::string_view table_id) {
    const ReportTable* t = b.find(table_id);
    if (!t) throw std::invalid_argument("unknown table id '" + std::string(table_id) + "'");
    std::string out;
    for (const auto& r : t->rows) {
        for (std::size_t i = 0; i < t->columns.size() && i < r.cells.size(); ++i) {
            const auto y = year_of(t->columns[i]);
            const auto* v = std::get_if<double>(&r.cells[i]);
            if (!y || !v) continue;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", *v);
            out += csv_escape(t->id + "/" + r.label) + "," + std::to_string(*y) + "," + buf + "\n";
        }
    }
    return out.empty() ? out : "series,x,y\n" + out;
}

GoldenTable read_golden(std::istream& in, const std::string& id, const std::string& source) {
    const CsvTable csv = read_csv(in, source);
    if (csv.header.empty() || to_lower(csv.header[0]) != "label") throw DataError(source, 1, "golden header must start with 'label'");
    GoldenTable g;
    g.id = id;
    g.columns.assign(csv.header.begin() + 1, csv.header.end());
    for (const auto& row : csv.rows) {
        if (row.fields.size() != csv.header.size()) throw DataError(source, row.line, "wrong number of fields");
        std::vector<Cell> cells;
        for (std::size_t i = 1; i < row.fields.size(); ++i) {
            const std::string& f = row.fields[i];
            if (f.empty()) {
                cells.emplace_back();
                continue;
            }
            double v = 0.0;
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec == std::errc() && p == f.data() + f.size()) {
                cells.emplace_back(v);
            } else {
                cells.emplace_back(f);
            }
        }
        g.rows.emplace_back(row.fields[0], std::move(cells));
    }
    return g;
}

std::string Tolerance::describe() const {
    char buf[64];
    switch (kind) {
        case TolKind::Exact: return "exact";
        case TolKind::Relative: std::snprintf(buf, sizeof buf, "rel %g%%", value * 100.0); return buf;
        case TolKind::Absolute: std::snprintf(buf, sizeof buf, "abs %g", value); return buf;
    }
    return "?";
}

namespace {

bool rule_matches(std::string_view pattern, std::string_view label) {
    if (pattern.empty()) return true;
    if (pattern.back() == '*') {
        const std::string p = to_lower(pattern.substr(0, pattern.size() - 1));
        return to_lower(label).rfind(p, 0) == 0;
    }
    return same_label(pattern, label);
}

const Exemption* find_exemption(const TablePolicy& p, std::string_view row, std::string_view col) {
    for (const auto& e : p.exemptions) {
        if (rule_matches(e.row, row) && rule_matches(e.column, col)) return &e;
    }
    return nullptr;
}

Tolerance tolerance_for(const TablePolicy& p, std::string_view row, std::string_view col) {
    Tolerance t = p.base;
    for (const auto& r : p.rules) {
        if (rule_matches(r.row, row) && rule_matches(r.column, col)) t = r.tolerance;
    }
    return t;
}

// Deviation measured in the tolerance's own terms; exact and relative comparisons against a
// printed zero pass when the value rounds to zero.
std::pair<double, bool> judge(double a, double e, const Tolerance& t) {
    constexpr double slack = 1e-9;
    switch (t.kind) {
        case TolKind::Exact: {
            const double d = std::abs(a - e);
            return {d, d <= slack * std::max(1.0, std::abs(e))};
        }
        case TolKind::Absolute: {
            const double d = std::abs(a - e);
            return {d, d <= t.value + slack};
        }
        case TolKind::Relative: {
            if (e == 0.0) return {std::abs(a), std::abs(a) < 0.5};
            const double d = (a - e) / std::abs(e);
            return {d, std::abs(d) <= t.value + slack};
        }
    }
    return {0.0, false};
}

}  // namespace

DiffReport diff_table(const ReportTable& actual, const GoldenTable& golden, const TablePolicy& policy) {
    DiffReport rep;
    for (const auto& [label, cells] : golden.rows) {
        const ReportRow* row = actual.find_row(label);
        for (std::size_t gi = 0; gi < golden.columns.size(); ++gi) {
            const Cell& expected = cells[gi];
            if (std::holds_alternative<std::monostate>(expected)) continue;
            CellDeviation cd;
            cd.table = actual.id;
            cd.row = label;
            cd.column = golden.columns[gi];
            cd.expected = expected;
            const auto ci = actual.column_index(golden.columns[gi]);
            if (ci) cd.column = actual.columns[*ci];
            if (!row || !ci || *ci >= row->cells.size()) {
                cd.status = CellStatus::Missing;
                cd.note = !row ? "row not produced" : "column not produced";
                rep.passed = false;
                rep.cells.push_back(std::move(cd));
                continue;
            }
            cd.actual = row->cells[*ci];
            Tolerance tol = tolerance_for(policy, label, cd.column);
            const Exemption* ex = find_exemption(policy, label, cd.column);
            const auto* e = std::get_if<double>(&expected);
            const auto* a = std::get_if<double>(&cd.actual);
            if (e && a) {
                std::optional<double> condition;
                if (policy.conditioning) {
                    auto it = policy.conditioning->condition_rows.find(row->label);
                    if (it != policy.conditioning->condition_rows.end()) {
                        if (const ReportRow* cr = actual.find_row(it->second)) {
                            if (const auto* k = std::get_if<double>(&cr->cells[*ci])) condition = *k;
                        }
                    }
                }
                if (condition) {
                    const auto& cs = *policy.conditioning;
                    tol = Tolerance::relative(std::max(cs.floor, cs.per_unit * *condition));
                }
                auto [dev, ok] = judge(*a, *e, tol);
                cd.deviation = dev;
                cd.tolerance = tol.describe();
                if (condition && *condition > policy.conditioning->limit) {
                    const auto& cs = *policy.conditioning;
                    const bool within_ratio = *a == *e || (*a > 0 && *e > 0 && *a / *e <= cs.ratio && *e / *a <= cs.ratio);
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "ill-conditioned (condition %.1f)%s", *condition,
                                  within_ratio ? ", within ratio bound" : "");
                    cd.note = buf;
                    cd.status = within_ratio ? CellStatus::Pass : CellStatus::Flagged;
                } else {
                    cd.status = ok ? CellStatus::Pass : CellStatus::Fail;
                }
            } else {
                const bool ok = !e && !a && fold(cell_text(expected, 0, false)) == fold(cell_text(cd.actual, 0, false));
                cd.tolerance = "exact";
                cd.deviation = ok ? 0.0 : 1.0;
                cd.status = ok ? CellStatus::Pass : CellStatus::Fail;
            }
            if (ex && cd.status != CellStatus::Pass) {
                cd.status = CellStatus::Exempt;
                cd.note = ex->reason;
            }
            if (cd.status == CellStatus::Fail) rep.passed = false;
            rep.cells.push_back(std::move(cd));
        }
    }
    return rep;
}

DiffReport diff_against_golden(const ReportBundle& bundle, const std::filesystem::path& golden_dir,
                               const ToleranceBook& book) {
    DiffReport all;
    for (const auto& t : bundle.tables) {
        const auto path = golden_dir / (t.id + ".csv");
        std::ifstream in(path);
        if (!in) throw DataError(path.string(), 0, "missing golden table " + t.id);
        const GoldenTable g = read_golden(in, t.id, path.string());
        auto it = book.find(t.id);
        const TablePolicy policy = it != book.end() ? it->second : TablePolicy{};
        DiffReport one = diff_table(t, g, policy);
        all.passed = all.passed && one.passed;
        for (auto& c : one.cells) all.cells.push_back(std::move(c));
    }
    return all;
}

ReportTable DiffReport::summary() const {
    ReportTable t;
    t.id = "DIFF";
    t.title = "Deviation from golden tables";
    t.columns = {"Cells", "Passed", "Exempt", "Flagged", "Failed", "Max |deviation|", "Status"};
    t.column_units = {"cells", "cells", "cells", "cells", "cells", "per tolerance", ""};
    std::vector<std::string> order;
    std::map<std::string, std::array<double, 6>> acc;
    for (const auto& c : cells) {
        if (!acc.count(c.table)) order.push_back(c.table);
        auto& a = acc[c.table];
        a[0] += 1;
        switch (c.status) {
            case CellStatus::Pass: a[1] += 1; break;
            case CellStatus::Exempt: a[2] += 1; break;
            case CellStatus::Flagged: a[3] += 1; break;
            case CellStatus::Fail:
            case CellStatus::Missing: a[4] += 1; break;
        }
        if (c.status == CellStatus::Pass || c.status == CellStatus::Fail) a[5] = std::max(a[5], std::abs(c.deviation));
    }
    for (const auto& id : order) {
        const auto& a = acc[id];
        auto& r = t.add_row(id, "", 0);
        for (int i = 0; i < 5; ++i) r.cells[i] = a[i];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", a[5]);
        r.cells[5] = std::string(buf);
        r.cells[6] = std::string(a[4] > 0 ? "FAIL" : "PASS");
    }
    return t;
}

ReportTable DiffReport::details() const {
    ReportTable t;
    t.id = "DIFF-CELLS";
    t.title = "Per-cell deviation from golden tables";
    t.columns = {"Table", "Row", "Column", "Expected", "Actual", "Deviation", "Tolerance", "Status", "Note"};
    for (const auto& c : cells) {
        auto& r = t.add_row(c.table + ":" + c.row + ":" + c.column, "", 0);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", c.deviation);
        r.cells = {c.table, c.row, c.column, cell_text(c.expected, 6, false), cell_text(c.actual, 6, false),
                   std::string(buf), c.tolerance, std::string(to_string(c.status)), c.note};
    }
    return t;
}

}  // namespace evgap
