#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairsample/csv.hpp"
#include "fairsample/matrix.hpp"
#include "fairsample/schema.hpp"

namespace fairsample {

/// How one schema column maps into encoded feature space. Numeric columns
/// occupy one feature scaled by (lo, hi); categorical columns occupy a
/// one-hot block, one feature per category in first-appearance order.
struct ColumnEncoding {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::size_t offset = 0;
    std::size_t width = 1;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::string> categories;
};

/// Fitted encoder: feature layout plus the label/group value mapping.
/// Carried by every Dataset (and saved inside model files) so that new rows
/// can be encoded into the same feature space and synthetic rows decoded
/// back to the original column vocabulary.
struct Encoding {
    std::vector<ColumnEncoding> features;
    std::size_t dim = 0;
    std::vector<std::string> feature_names;

    std::string label_column, favorable_value, unfavorable_value;
    std::string protected_column, privileged_value, unprivileged_value;

    /// Encodes raw column values (ordered as `features`) into a feature row.
    /// Unseen categories encode as an all-zero block.
    std::vector<double> encode_features(const std::vector<std::string>& raw,
                                        const std::string& origin,
                                        std::size_t line_no) const;
    /// Inverse of encode_features: un-scales numerics, maps one-hot blocks
    /// back to category names.
    std::vector<std::string> decode_features(std::span<const double> x) const;
};

struct Dataset {
    Matrix X;                    // n x d encoded features
    std::vector<std::int8_t> y;  // 1 = favorable label
    std::vector<std::int8_t> g;  // 1 = privileged group
    std::vector<double> w;       // nonnegative instance weights
    Encoding enc;

    std::size_t size() const { return X.rows; }
    std::size_t dim() const { return X.cols; }

    Dataset take(std::span<const std::size_t> indices) const;
};

/// Tallies of the four (group, label) cells.
struct CellCounts {
    std::int64_t pf = 0;  // privileged, favorable
    std::int64_t pu = 0;  // privileged, unfavorable
    std::int64_t uf = 0;  // unprivileged, favorable
    std::int64_t uu = 0;  // unprivileged, unfavorable

    std::int64_t n() const { return pf + pu + uf + uu; }
    std::int64_t n_privileged() const { return pf + pu; }
    std::int64_t n_unprivileged() const { return uf + uu; }

    /// Favorable base rate of the privileged group; empty if the group is empty.
    std::optional<double> base_rate_privileged() const;
    std::optional<double> base_rate_unprivileged() const;
    /// r_p - r_u; empty if either rate is undefined.
    std::optional<double> base_rate_gap() const;
};

/// Loads a CSV and encodes it per the schema: numeric columns min-max scaled
/// to [0,1] on their own observed range (constant columns map to 0),
/// categorical columns one-hot in first-appearance order, label/protected
/// columns mapped to y/g and excluded from the features.
Dataset load_csv(const std::string& path, const Schema& schema);

/// Same, from an already-parsed table.
Dataset encode_table(const csv::Table& table, const Schema& schema,
                     const std::string& origin);

/// Encodes rows of a table into the feature space of an existing encoding
/// (for scoring new data with a trained model). Numerics use the fitted
/// scale; unseen categories become all-zero blocks.
Dataset encode_with(const csv::Table& table, const Encoding& enc,
                    const std::string& origin);

CellCounts cell_counts(const Dataset& ds);

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Deterministic stratified split. Test size is round-half-up of
/// n * test_fraction; every (g,y) cell with at least 2 members keeps at
/// least one row in train. Min-max scaling is re-fitted on the train part
/// and applied to both, so test features may fall outside [0,1].
std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction,
                                  std::uint64_t seed);

/// As split(), additionally reporting which original rows landed where.
SplitResult split_with_indices(const Dataset& ds, double test_fraction,
                               std::uint64_t seed);

/// FNV-1a hash of a split's test-row indices; used to verify that paired
/// experiment arms really saw identical splits.
std::uint64_t split_fingerprint(std::span<const std::size_t> test_indices);

}  // namespace fairsample
