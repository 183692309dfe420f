#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fairsample/dataset.hpp"
#include "fairsample/rng.hpp"

namespace testutil {

/// Writes content to a fresh file under a per-process temp directory and
/// returns its path.
inline std::string write_temp_file(const std::string& name,
                                   const std::string& content) {
    namespace fs = std::filesystem;
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("fairsample-tests-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

inline std::string temp_path(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("fairsample-tests-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return (dir / name).string();
}

/// Builds a Dataset directly from rows, with an identity feature scale
/// (lo=0, hi=1) and synthetic column names. Handy for unit tests that do not
/// care about CSV ingestion.
inline fairsample::Dataset make_dataset(
    const std::vector<std::vector<double>>& rows,
    const std::vector<int>& y, const std::vector<int>& g,
    const std::vector<double>& w = {}) {
    fairsample::Dataset ds;
    const std::size_t n = rows.size();
    const std::size_t d = n ? rows[0].size() : 0;
    ds.X = fairsample::Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) ds.X.at(i, j) = rows[i][j];
    }
    ds.y.assign(y.begin(), y.end());
    ds.g.assign(g.begin(), g.end());
    ds.w = w.empty() ? std::vector<double>(n, 1.0) : w;

    ds.enc.dim = d;
    for (std::size_t j = 0; j < d; ++j) {
        fairsample::ColumnEncoding fe;
        fe.name = "f" + std::to_string(j);
        fe.kind = fairsample::ColumnKind::Numeric;
        fe.offset = j;
        fe.width = 1;
        fe.lo = 0.0;
        fe.hi = 1.0;
        ds.enc.features.push_back(fe);
        ds.enc.feature_names.push_back(fe.name);
    }
    ds.enc.label_column = "label";
    ds.enc.favorable_value = "yes";
    ds.enc.unfavorable_value = "no";
    ds.enc.protected_column = "group";
    ds.enc.privileged_value = "p";
    ds.enc.unprivileged_value = "u";
    return ds;
}

inline std::string data_file(const std::string& name) {
    return std::string(FAIRSAMPLE_DATA_DIR) + "/" + name;
}

/// Writes a small biased CSV: the `score1` feature tracks the label, the
/// `aux` feature tracks the group, and the groups differ in favorable base
/// rate (privileged group "A", favorable outcome "yes"). Cell sizes are
/// exact, so tests can rely on them.
inline std::string write_biased_csv(const std::string& name,
                                    int per_group = 60,
                                    double rate_priv = 0.7,
                                    double rate_unpriv = 0.25,
                                    std::uint64_t seed = 11) {
    fairsample::Rng rng(seed);
    std::ostringstream out;
    out << "score1,aux,dept,group,outcome\n";
    const char* depts[3] = {"sales", "eng", "ops"};
    for (int group = 1; group >= 0; --group) {
        const double rate = group ? rate_priv : rate_unpriv;
        const int favorable = static_cast<int>(
            std::floor(rate * per_group + 0.5));
        for (int i = 0; i < per_group; ++i) {
            const int label = i < favorable ? 1 : 0;
            const double z = label + 0.5 * rng.normal();
            const double a = group + 0.5 * rng.normal();
            out << z << ',' << a << ',' << depts[rng.below(3)] << ','
                << (group ? "A" : "B") << ',' << (label ? "yes" : "no")
                << "\n";
        }
    }
    return write_temp_file(name, out.str());
}

inline std::string write_biased_schema(const std::string& name) {
    return write_temp_file(name,
                           "label_column = outcome\n"
                           "favorable_value = yes\n"
                           "protected_column = group\n"
                           "privileged_value = A\n"
                           "numeric = score1, aux\n"
                           "categorical = dept, group, outcome\n");
}

}  // namespace testutil
