#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairsample::csv {

/// A parsed delimited file: header plus raw string records.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based physical line number of each record, for error messages.
    std::vector<std::size_t> line_numbers;

    std::size_t column_index(const std::string& name) const;  // npos if absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Reads an RFC-4180-style CSV with a header row. Quoted fields may contain
/// commas, doubled quotes, and newlines. Whitespace around unquoted fields is
/// trimmed so files like "a, b, c" load cleanly.
Table read_file(const std::string& path);
Table parse(std::istream& in, const std::string& origin);

void write_row(std::ostream& out, const std::vector<std::string>& fields);
void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

/// Shortest decimal string that round-trips the value.
std::string format_double(double v);

}  // namespace fairsample::csv
