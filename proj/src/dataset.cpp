#include "fairsample/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "fairsample/errors.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

namespace {

double parse_numeric(const std::string& raw, const std::string& origin,
                     std::size_t line_no, const std::string& column) {
    if (raw.empty()) {
        throw DataError(origin + ":" + std::to_string(line_no) +
                        ": missing value in column '" + column + "'");
    }
    double v = 0.0;
    const char* first = raw.data();
    const char* last = raw.data() + raw.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
        throw DataError(origin + ":" + std::to_string(line_no) +
                        ": cannot parse '" + raw + "' as a number in column '" +
                        column + "'");
    }
    return v;
}

double scale_value(double v, double lo, double hi) {
    const double range = hi - lo;
    return range > 0.0 ? (v - lo) / range : v - lo;
}

struct BinaryMapping {
    std::string positive;  // value mapped to 1
    std::string negative;  // value mapped to 0
};

BinaryMapping fit_binary_column(const csv::Table& t, std::size_t col,
                                const std::string& positive_value,
                                const std::string& role,
                                const std::string& origin) {
    std::vector<std::string> distinct;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& v = t.rows[i][col];
        if (v.empty()) {
            throw DataError(origin + ":" + std::to_string(t.line_numbers[i]) +
                            ": missing value in " + role + " column '" +
                            t.header[col] + "'");
        }
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
            distinct.push_back(v);
            if (distinct.size() > 2) {
                throw DataError(origin + ": " + role + " column '" + t.header[col] +
                                "' has more than two distinct values");
            }
        }
    }
    auto it = std::find(distinct.begin(), distinct.end(), positive_value);
    if (it == distinct.end()) {
        throw DataError(origin + ": value '" + positive_value +
                        "' never occurs in " + role + " column '" + t.header[col] +
                        "'");
    }
    if (distinct.size() != 2) {
        throw DataError(origin + ": " + role + " column '" + t.header[col] +
                        "' has only one distinct value, need exactly two");
    }
    BinaryMapping m;
    m.positive = positive_value;
    m.negative = distinct[0] == positive_value ? distinct[1] : distinct[0];
    return m;
}

}  // namespace

std::optional<double> CellCounts::base_rate_privileged() const {
    const auto d = n_privileged();
    if (d <= 0) return std::nullopt;
    return static_cast<double>(pf) / static_cast<double>(d);
}

std::optional<double> CellCounts::base_rate_unprivileged() const {
    const auto d = n_unprivileged();
    if (d <= 0) return std::nullopt;
    return static_cast<double>(uf) / static_cast<double>(d);
}

std::optional<double> CellCounts::base_rate_gap() const {
    const auto rp = base_rate_privileged();
    const auto ru = base_rate_unprivileged();
    if (!rp || !ru) return std::nullopt;
    return *rp - *ru;
}

std::vector<double> Encoding::encode_features(const std::vector<std::string>& raw,
                                              const std::string& origin,
                                              std::size_t line_no) const {
    std::vector<double> x(dim, 0.0);
    for (std::size_t c = 0; c < features.size(); ++c) {
        const ColumnEncoding& fe = features[c];
        const std::string& v = raw[c];
        if (fe.kind == ColumnKind::Numeric) {
            x[fe.offset] = scale_value(
                parse_numeric(v, origin, line_no, fe.name), fe.lo, fe.hi);
        } else {
            if (v.empty()) {
                throw DataError(origin + ":" + std::to_string(line_no) +
                                ": missing value in column '" + fe.name + "'");
            }
            auto it = std::find(fe.categories.begin(), fe.categories.end(), v);
            if (it != fe.categories.end()) {
                x[fe.offset + static_cast<std::size_t>(
                                  it - fe.categories.begin())] = 1.0;
            }
            // Unseen category: block stays all-zero.
        }
    }
    return x;
}

std::vector<std::string> Encoding::decode_features(std::span<const double> x) const {
    std::vector<std::string> out;
    out.reserve(features.size());
    for (const ColumnEncoding& fe : features) {
        if (fe.kind == ColumnKind::Numeric) {
            const double range = fe.hi - fe.lo;
            const double raw = range > 0.0 ? fe.lo + x[fe.offset] * range
                                           : fe.lo + x[fe.offset];
            out.push_back(csv::format_double(raw));
        } else {
            std::size_t best = 0;
            for (std::size_t j = 1; j < fe.width; ++j) {
                if (x[fe.offset + j] > x[fe.offset + best]) best = j;
            }
            out.push_back(fe.categories[best]);
        }
    }
    return out;
}

Dataset Dataset::take(std::span<const std::size_t> indices) const {
    Dataset out;
    out.X = X.take(indices);
    out.y.reserve(indices.size());
    out.g.reserve(indices.size());
    out.w.reserve(indices.size());
    for (std::size_t i : indices) {
        out.y.push_back(y[i]);
        out.g.push_back(g[i]);
        out.w.push_back(w[i]);
    }
    out.enc = enc;
    return out;
}

Dataset encode_table(const csv::Table& t, const Schema& schema,
                     const std::string& origin) {
    if (t.rows.empty()) {
        throw DataError(origin + ": empty input (no data rows)");
    }
    // Resolve schema columns against the header.
    std::vector<std::size_t> col_index;
    for (const auto& [name, kind] : schema.columns) {
        const std::size_t idx = t.column_index(name);
        if (idx == csv::Table::npos) {
            throw SchemaError(origin + ": column '" + name +
                              "' declared in schema but absent from data");
        }
        col_index.push_back(idx);
    }
    const std::size_t label_col = t.column_index(schema.label_column);
    const std::size_t prot_col = t.column_index(schema.protected_column);

    Encoding enc;
    enc.label_column = schema.label_column;
    enc.protected_column = schema.protected_column;

    const BinaryMapping label_map = fit_binary_column(
        t, label_col, schema.favorable_value, "label", origin);
    enc.favorable_value = label_map.positive;
    enc.unfavorable_value = label_map.negative;
    const BinaryMapping group_map = fit_binary_column(
        t, prot_col, schema.privileged_value, "protected", origin);
    enc.privileged_value = group_map.positive;
    enc.unprivileged_value = group_map.negative;

    // Fit feature columns.
    const std::size_t n = t.rows.size();
    std::vector<std::vector<double>> numeric_values;  // parallel to features
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& [name, kind] = schema.columns[c];
        if (name == schema.label_column || name == schema.protected_column) {
            continue;
        }
        ColumnEncoding fe;
        fe.name = name;
        fe.kind = kind;
        fe.offset = enc.dim;
        if (kind == ColumnKind::Numeric) {
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) {
                vals[i] = parse_numeric(t.rows[i][col_index[c]], origin,
                                        t.line_numbers[i], name);
            }
            fe.lo = *std::min_element(vals.begin(), vals.end());
            fe.hi = *std::max_element(vals.begin(), vals.end());
            fe.width = 1;
            enc.feature_names.push_back(name);
            numeric_values.push_back(std::move(vals));
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const std::string& v = t.rows[i][col_index[c]];
                if (v.empty()) {
                    throw DataError(origin + ":" +
                                    std::to_string(t.line_numbers[i]) +
                                    ": missing value in column '" + name + "'");
                }
                if (std::find(fe.categories.begin(), fe.categories.end(), v) ==
                    fe.categories.end()) {
                    fe.categories.push_back(v);
                }
            }
            fe.width = fe.categories.size();
            for (const auto& cat : fe.categories) {
                enc.feature_names.push_back(name + "=" + cat);
            }
            numeric_values.emplace_back();
        }
        enc.dim += fe.width;
        enc.features.push_back(std::move(fe));
    }

    Dataset ds;
    ds.enc = enc;
    ds.X = Matrix(n, enc.dim);
    ds.y.resize(n);
    ds.g.resize(n);
    ds.w.assign(n, 1.0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = t.rows[i];
        ds.y[i] = row[label_col] == label_map.positive ? 1 : 0;
        ds.g[i] = row[prot_col] == group_map.positive ? 1 : 0;
    }
    std::size_t feature_idx = 0;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& [name, kind] = schema.columns[c];
        if (name == schema.label_column || name == schema.protected_column) {
            continue;
        }
        const ColumnEncoding& fe = ds.enc.features[feature_idx];
        if (kind == ColumnKind::Numeric) {
            const auto& vals = numeric_values[feature_idx];
            for (std::size_t i = 0; i < n; ++i) {
                ds.X.at(i, fe.offset) = scale_value(vals[i], fe.lo, fe.hi);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const std::string& v = t.rows[i][col_index[c]];
                const auto it =
                    std::find(fe.categories.begin(), fe.categories.end(), v);
                ds.X.at(i, fe.offset + static_cast<std::size_t>(
                                           it - fe.categories.begin())) = 1.0;
            }
        }
        ++feature_idx;
    }
    return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
    return encode_table(csv::read_file(path), schema, path);
}

Dataset encode_with(const csv::Table& t, const Encoding& enc,
                    const std::string& origin) {
    if (t.rows.empty()) {
        throw DataError(origin + ": empty input (no data rows)");
    }
    std::vector<std::size_t> col_index;
    for (const ColumnEncoding& fe : enc.features) {
        const std::size_t idx = t.column_index(fe.name);
        if (idx == csv::Table::npos) {
            throw SchemaError(origin + ": column '" + fe.name +
                              "' required by the model but absent from data");
        }
        col_index.push_back(idx);
    }
    const std::size_t label_col = t.column_index(enc.label_column);
    const std::size_t prot_col = t.column_index(enc.protected_column);
    if (label_col == csv::Table::npos) {
        throw SchemaError(origin + ": column '" + enc.label_column +
                          "' required by the model but absent from data");
    }
    if (prot_col == csv::Table::npos) {
        throw SchemaError(origin + ": column '" + enc.protected_column +
                          "' required by the model but absent from data");
    }

    const std::size_t n = t.rows.size();
    Dataset ds;
    ds.enc = enc;
    ds.X = Matrix(n, enc.dim);
    ds.y.resize(n);
    ds.g.resize(n);
    ds.w.assign(n, 1.0);
    std::vector<std::string> raw(enc.features.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = t.rows[i];
        for (std::size_t c = 0; c < enc.features.size(); ++c) {
            raw[c] = row[col_index[c]];
        }
        const auto x = enc.encode_features(raw, origin, t.line_numbers[i]);
        std::copy(x.begin(), x.end(), ds.X.row(i));

        const std::string& lv = row[label_col];
        if (lv == enc.favorable_value) {
            ds.y[i] = 1;
        } else if (lv == enc.unfavorable_value) {
            ds.y[i] = 0;
        } else {
            throw DataError(origin + ":" + std::to_string(t.line_numbers[i]) +
                            ": unknown label value '" + lv + "'");
        }
        const std::string& gv = row[prot_col];
        if (gv == enc.privileged_value) {
            ds.g[i] = 1;
        } else if (gv == enc.unprivileged_value) {
            ds.g[i] = 0;
        } else {
            throw DataError(origin + ":" + std::to_string(t.line_numbers[i]) +
                            ": unknown protected value '" + gv + "'");
        }
    }
    return ds;
}

CellCounts cell_counts(const Dataset& ds) {
    CellCounts c;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.g[i]) {
            (ds.y[i] ? c.pf : c.pu) += 1;
        } else {
            (ds.y[i] ? c.uf : c.uu) += 1;
        }
    }
    return c;
}

namespace {

// Re-fits min-max scaling on the train part and applies it to a part.
void rescale_part(Dataset& part, const Encoding& source,
                  const std::vector<std::pair<double, double>>& new_range) {
    for (std::size_t f = 0; f < part.enc.features.size(); ++f) {
        ColumnEncoding& fe = part.enc.features[f];
        if (fe.kind != ColumnKind::Numeric) continue;
        const ColumnEncoding& old = source.features[f];
        const auto [lo, hi] = new_range[f];
        for (std::size_t i = 0; i < part.size(); ++i) {
            const double old_range = old.hi - old.lo;
            const double raw = old_range > 0.0
                                   ? old.lo + part.X.at(i, fe.offset) * old_range
                                   : old.lo + part.X.at(i, fe.offset);
            part.X.at(i, fe.offset) = scale_value(raw, lo, hi);
        }
        fe.lo = lo;
        fe.hi = hi;
    }
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction,
                                  std::uint64_t seed) {
    auto r = split_with_indices(ds, test_fraction, seed);
    return {std::move(r.train), std::move(r.test)};
}

SplitResult split_with_indices(const Dataset& ds, double test_fraction,
                               std::uint64_t seed) {
    const std::size_t n = ds.size();
    if (n < 2) {
        throw ArgumentError("split needs at least 2 rows, got " +
                            std::to_string(n));
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ArgumentError("test_fraction must lie in (0,1)");
    }
    std::size_t total_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * test_fraction + 0.5));
    if (total_test == 0 || total_test >= n) {
        throw ArgumentError("test_fraction " + std::to_string(test_fraction) +
                            " produces an empty train or test part");
    }

    // Cell membership: id = g*2 + y.
    std::vector<std::vector<std::size_t>> cells(4);
    for (std::size_t i = 0; i < n; ++i) {
        cells[static_cast<std::size_t>(ds.g[i]) * 2 +
              static_cast<std::size_t>(ds.y[i])]
            .push_back(i);
    }

    // Largest-remainder allocation of the test quota across cells, capped so
    // cells of size >= 2 keep at least one row in train.
    std::size_t quota[4];
    double remainder[4];
    std::size_t caps[4];
    std::size_t assigned = 0, cap_total = 0;
    for (std::size_t c = 0; c < 4; ++c) {
        const double exact = static_cast<double>(cells[c].size()) * test_fraction;
        quota[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - static_cast<double>(quota[c]);
        caps[c] = cells[c].size() >= 2 ? cells[c].size() - 1 : cells[c].size();
        assigned += quota[c];
        cap_total += caps[c];
    }
    // The train-representation guarantee wins over the rounding rule when the
    // two conflict at extreme fractions.
    if (total_test > cap_total) total_test = cap_total;
    if (total_test == 0) {
        throw ArgumentError("test_fraction " + std::to_string(test_fraction) +
                            " produces an empty test part");
    }
    std::size_t order[4] = {0, 1, 2, 3};
    std::sort(std::begin(order), std::end(order), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        return a < b;
    });
    while (assigned < total_test) {
        bool progressed = false;
        for (std::size_t c : order) {
            if (assigned == total_test) break;
            if (quota[c] < caps[c]) {
                ++quota[c];
                ++assigned;
                progressed = true;
            }
        }
        if (!progressed) break;
    }

    std::vector<std::size_t> test_idx, train_idx;
    for (std::size_t c = 0; c < 4; ++c) {
        auto members = cells[c];
        Rng rng(Rng::mix(seed) ^ c);
        rng.shuffle(members);
        for (std::size_t k = 0; k < members.size(); ++k) {
            (k < quota[c] ? test_idx : train_idx).push_back(members[k]);
        }
    }
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());

    Dataset train = ds.take(train_idx);
    Dataset test = ds.take(test_idx);

    // Re-fit numeric scaling on train only; test reuses train's scale and may
    // fall outside [0,1].
    std::vector<std::pair<double, double>> ranges;
    for (const ColumnEncoding& fe : ds.enc.features) {
        if (fe.kind != ColumnKind::Numeric) {
            ranges.emplace_back(0.0, 0.0);
            continue;
        }
        double lo = 0.0, hi = 0.0;
        const double old_range = fe.hi - fe.lo;
        for (std::size_t i = 0; i < train.size(); ++i) {
            const double raw = old_range > 0.0
                                   ? fe.lo + train.X.at(i, fe.offset) * old_range
                                   : fe.lo + train.X.at(i, fe.offset);
            if (i == 0 || raw < lo) lo = raw;
            if (i == 0 || raw > hi) hi = raw;
        }
        ranges.emplace_back(lo, hi);
    }
    rescale_part(train, ds.enc, ranges);
    rescale_part(test, ds.enc, ranges);
    return {std::move(train), std::move(test), std::move(train_idx),
            std::move(test_idx)};
}

std::uint64_t split_fingerprint(std::span<const std::size_t> test_indices) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mixin = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mixin(test_indices.size());
    for (std::size_t i : test_indices) mixin(i);
    return h;
}

}  // namespace fairsample
