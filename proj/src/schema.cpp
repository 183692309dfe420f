#include "fairsample/schema.hpp"

#include <fstream>
#include <sstream>

#include "fairsample/errors.hpp"

namespace fairsample {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

bool Schema::has_column(const std::string& name) const {
    for (const auto& [n, k] : columns) {
        if (n == name) return true;
    }
    return false;
}

ColumnKind Schema::kind_of(const std::string& name) const {
    for (const auto& [n, k] : columns) {
        if (n == name) return k;
    }
    throw SchemaError("schema has no column named '" + name + "'");
}

Schema Schema::parse(std::istream& in, const std::string& origin) {
    Schema s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw SchemaError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw SchemaError(origin + ":" + std::to_string(line_no) +
                              ": empty value for '" + key + "'");
        }
        if (key == "label_column") {
            s.label_column = value;
        } else if (key == "favorable_value") {
            s.favorable_value = value;
        } else if (key == "protected_column") {
            s.protected_column = value;
        } else if (key == "privileged_value") {
            s.privileged_value = value;
        } else if (key == "numeric" || key == "categorical") {
            const ColumnKind kind =
                key == "numeric" ? ColumnKind::Numeric : ColumnKind::Categorical;
            for (const auto& name : split_list(value)) {
                if (s.has_column(name)) {
                    throw SchemaError(origin + ": column '" + name +
                                      "' declared twice");
                }
                s.columns.emplace_back(name, kind);
            }
        } else {
            throw SchemaError(origin + ":" + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
    if (s.columns.empty()) throw SchemaError(origin + ": no columns declared");
    if (s.label_column.empty()) throw SchemaError(origin + ": label_column missing");
    if (s.favorable_value.empty())
        throw SchemaError(origin + ": favorable_value missing");
    if (s.protected_column.empty())
        throw SchemaError(origin + ": protected_column missing");
    if (s.privileged_value.empty())
        throw SchemaError(origin + ": privileged_value missing");
    if (!s.has_column(s.label_column)) {
        throw SchemaError(origin + ": label_column '" + s.label_column +
                          "' is not among the declared columns");
    }
    if (!s.has_column(s.protected_column)) {
        throw SchemaError(origin + ": protected_column '" + s.protected_column +
                          "' is not among the declared columns");
    }
    if (s.label_column == s.protected_column) {
        throw SchemaError(origin + ": label_column and protected_column must differ");
    }
    return s;
}

Schema Schema::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    return parse(in, path);
}

}  // namespace fairsample
