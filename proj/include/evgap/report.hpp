#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace evgap {

using Cell = std::variant<std::monostate, double, std::string>;

enum class FootnoteKind { Note, Discrepancy, OpenQuestion, Extrapolated };
std::string_view to_string(FootnoteKind k);

struct Footnote {
    FootnoteKind kind = FootnoteKind::Note;
    std::string text;
};

struct ReportRow {
    std::string label;
    std::string unit;  // empty: the column unit applies
    std::vector<Cell> cells;
    int decimals = 0;
};

struct ReportTable {
    std::string id;
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::string> column_units;  // used when a row has no unit
    std::vector<int> column_decimals;       // overrides row decimals where >= 0
    std::vector<ReportRow> rows;
    std::vector<Footnote> footnotes;

    ReportRow& add_row(std::string label, std::string unit, int decimals = 0);
    const ReportRow* find_row(std::string_view label) const;
    std::optional<std::size_t> column_index(std::string_view name) const;
    std::string unit_of(const ReportRow& row, std::size_t col) const;
    int decimals_of(const ReportRow& row, std::size_t col) const;
    void note(FootnoteKind kind, std::string text) { footnotes.push_back({kind, std::move(text)}); }
};

struct ReportBundle {
    std::vector<ReportTable> tables;
    const ReportTable* find(std::string_view id) const;
};

enum class OutputFormat { Human, Csv, Json, Series };
std::optional<OutputFormat> parse_output_format(std::string_view text);

std::string format_number(double v, int decimals, bool separators);
std::string render_human(const ReportTable& t);
std::string render_csv(const ReportTable& t);
nlohmann::ordered_json to_json(const ReportTable& t);
std::string render(const ReportBundle& b, OutputFormat f);

// "series,x,y" lines for every numeric cell in a year-named column. Empty table: empty string.
std::string emit_plot_series(const ReportBundle& b, std::string_view table_id);

// Golden fixtures: CSV with header "label,<columns...>". Empty cells are not compared.
struct GoldenTable {
    std::string id;
    std::vector<std::string> columns;
    std::vector<std::pair<std::string, std::vector<Cell>>> rows;
};

GoldenTable read_golden(std::istream& in, const std::string& id, const std::string& source);

enum class TolKind { Exact, Relative, Absolute };

struct Tolerance {
    TolKind kind = TolKind::Relative;
    double value = 0.0;

    static Tolerance exact() { return {TolKind::Exact, 0.0}; }
    static Tolerance relative(double v) { return {TolKind::Relative, v}; }
    static Tolerance absolute(double v) { return {TolKind::Absolute, v}; }
    std::string describe() const;
};

struct CellRule {
    std::string row;     // empty: any row; trailing '*' matches a prefix
    std::string column;  // empty: any column
    Tolerance tolerance;
};

struct Exemption {
    std::string row;
    std::string column;
    std::string reason;
};

// Relative tolerance scaled by a condition number read from a companion row of the same table.
// Cells whose condition exceeds `limit` pass if within a factor `ratio` of the golden value,
// and are otherwise flagged.
struct ConditionScaling {
    std::map<std::string, std::string> condition_rows;  // value row -> condition row
    double per_unit = 0.01;
    double floor = 0.02;
    double limit = 10.0;
    double ratio = 3.0;
};

struct TablePolicy {
    Tolerance base = Tolerance::relative(0.001);
    std::vector<CellRule> rules;  // later rules win
    std::vector<Exemption> exemptions;
    std::optional<ConditionScaling> conditioning;
};

using ToleranceBook = std::map<std::string, TablePolicy, std::less<>>;

enum class CellStatus { Pass, Fail, Exempt, Flagged, Missing };
std::string_view to_string(CellStatus s);

struct CellDeviation {
    std::string table;
    std::string row;
    std::string column;
    Cell expected;
    Cell actual;
    double deviation = 0.0;  // relative or absolute per tolerance kind
    std::string tolerance;
    CellStatus status = CellStatus::Pass;
    std::string note;
};

struct DiffReport {
    std::vector<CellDeviation> cells;
    bool passed = true;

    ReportTable summary() const;   // "DIFF": one row per table
    ReportTable details() const;   // "DIFF-CELLS": one row per compared cell
};

DiffReport diff_table(const ReportTable& actual, const GoldenTable& golden, const TablePolicy& policy);
// Throws DataError when a golden file for a bundle table is missing.
DiffReport diff_against_golden(const ReportBundle& bundle, const std::filesystem::path& golden_dir,
                               const ToleranceBook& book);

}  // namespace evgap
