#include "fairsample/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fairsample/errors.hpp"

namespace fairsample::csv {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

}  // namespace

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return npos;
}

Table parse(std::istream& in, const std::string& origin) {
    Table t;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool any_char = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        fields.push_back(field_was_quoted ? field : trim(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        // Skip records that are entirely empty (trailing newline, blank lines).
        if (!(fields.size() == 1 && fields[0].empty())) {
            if (t.header.empty()) {
                t.header = fields;
            } else {
                if (fields.size() != t.header.size()) {
                    throw DataError(origin + ":" + std::to_string(record_line) +
                                    ": expected " + std::to_string(t.header.size()) +
                                    " fields, got " + std::to_string(fields.size()));
                }
                t.rows.push_back(fields);
                t.line_numbers.push_back(record_line);
            }
        }
        fields.clear();
    };

    char c;
    while (in.get(c)) {
        any_char = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && trim(field).empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
            field.clear();
        } else if (c == '"' && field_was_quoted) {
            in_quotes = true;  // quote reopened within the same field
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_record();
            ++line;
            record_line = line;
        } else if (!(field_was_quoted && is_space(c))) {
            // Whitespace between a closing quote and the delimiter is noise.
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw DataError(origin + ": unterminated quoted field");
    }
    if (!field.empty() || !fields.empty()) end_record();

    if (!any_char || t.header.empty()) {
        throw DataError(origin + ": empty input (no header row)");
    }
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    return parse(in, path);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        const bool needs_quotes =
            f.find_first_of(",\"\n\r") != std::string::npos ||
            (!f.empty() && (is_space(f.front()) || is_space(f.back())));
        if (needs_quotes) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write file: " + path);
    }
    write_row(out, header);
    for (const auto& r : rows) write_row(out, r);
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace fairsample::csv
