#include "evgap/csv.hpp"

#include <charconv>

#include "evgap/core.hpp"

namespace evgap {

std::vector<std::string> split_csv_line(std::string_view line, const std::string& source,
                                        std::size_t line_no) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            if (!trim(field).empty()) throw DataError(source, line_no, "stray quote inside field");
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw DataError(source, line_no, "unterminated quoted field");
    out.push_back(was_quoted ? field : trim(field));
    return out;
}

CsvTable read_csv(std::istream& in, const std::string& source) {
    CsvTable table;
    table.source = source;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto fields = split_csv_line(line, source, line_no);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() < table.header.size()) fields.resize(table.header.size());
        if (fields.size() > table.header.size()) {
            throw DataError(source, line_no,
                            "expected " + std::to_string(table.header.size()) + " fields, found " +
                                std::to_string(fields.size()));
        }
        table.rows.push_back({line_no, std::move(fields)});
    }
    if (!have_header) throw DataError(source, 0, "missing header line");
    return table;
}

bool CsvTable::has_column(std::string_view name) const {
    const std::string key = to_lower(name);
    for (const auto& h : header) {
        if (to_lower(h) == key) return true;
    }
    return false;
}

std::size_t CsvTable::column(std::string_view name) const {
    const std::string key = to_lower(name);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (to_lower(header[i]) == key) return i;
    }
    throw DataError(source, 0, "missing column '" + std::string(name) + "'");
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos &&
        (field.empty() || (field.front() != ' ' && field.back() != ' '))) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

double parse_number(std::string_view text, const std::string& source, std::size_t line) {
    const std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw DataError(source, line, "not a number: '" + t + "'");
    }
    return v;
}

int parse_year(std::string_view text, const std::string& source, std::size_t line) {
    const std::string t = trim(text);
    int y = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), y);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw DataError(source, line, "not a year: '" + t + "'");
    }
    return y;
}

}  // namespace evgap
