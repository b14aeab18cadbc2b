#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace evgap {

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    // Column index by (case-insensitive) name; throws DataError when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

// Comma-separated with RFC 4180 quoting. Blank lines and lines starting
// with '#' are skipped; the first remaining line is the header.
// Unquoted fields are trimmed.
CsvTable read_csv(std::istream& in, const std::string& source);

std::vector<std::string> split_csv_line(std::string_view line, const std::string& source, std::size_t line_no);

// Quote a field if it needs it.
std::string csv_escape(std::string_view field);

double parse_number(std::string_view text, const std::string& source, std::size_t line);
int parse_year(std::string_view text, const std::string& source, std::size_t line);

}  // namespace evgap
