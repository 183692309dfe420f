#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairsample/dataset.hpp"
#include "fairsample/matrix.hpp"

namespace fairsample {

/// Which (group, label) cells receive synthetic rows.
///
///   ExpandUnprivilegedFavored  - raise the unprivileged favorable base rate
///                                up to the privileged rate.
///   ExpandPrivilegedUnfavored  - lower the privileged rate down to the
///                                unprivileged rate by adding unfavorable
///                                privileged rows.
///   Combined                   - meet at the pooled favorable rate from both
///                                sides, preserving the class prior.
enum class Strategy {
    ExpandUnprivilegedFavored,
    ExpandPrivilegedUnfavored,
    Combined,
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// Synthetic-row counts per permitted cell. Only the unprivileged-favorable
/// and privileged-unfavorable cells can ever be targeted.
struct CellTargets {
    std::int64_t unprivileged_favored = 0;
    std::int64_t privileged_unfavored = 0;

    std::int64_t total() const {
        return unprivileged_favored + privileged_unfavored;
    }
};

/// Number of synthetic rows needed to equalize base rates under the given
/// strategy. Counts use a ceiling, so the closed gap may overshoot by at
/// most one sample's worth; if the disadvantaged direction already holds,
/// all targets are zero.
CellTargets target_counts(const CellCounts& cells, Strategy strategy);

struct OversamplePlan {
    Strategy strategy = Strategy::ExpandUnprivilegedFavored;
    int k_neighbors = 5;
    std::uint64_t seed = 0;
    CellTargets targets;

    nlohmann::ordered_json to_json() const;
    static OversamplePlan from_json(const nlohmann::ordered_json& j);
};

/// target_counts plus validation that every targeted cell has at least the
/// two members SMOTE interpolation needs.
OversamplePlan make_plan(const CellCounts& cells, Strategy strategy,
                         int k_neighbors, std::uint64_t seed);

struct NeighborResult {
    std::vector<std::size_t> indices;
    bool truncated = false;  // fewer than k candidates existed
};

/// The k rows of `points` nearest to row `query` in Euclidean distance,
/// excluding the query itself; ties break toward the lower index.
NeighborResult nearest_neighbors(const Matrix& points, std::size_t query,
                                 std::size_t k);

/// One SMOTE interpolation step: numeric coordinates move to
/// x + u * (x_nn - x); each one-hot block is copied whole from the nearer
/// donor (x when u < 0.5, x_nn otherwise).
std::vector<double> smote_sample(std::span<const double> x,
                                 std::span<const double> x_nn, double u,
                                 const Encoding& enc);

/// Appends the planned synthetic rows to `train`. Original rows come first
/// and are untouched; each targeted cell draws donors uniformly with
/// replacement from its own members, interpolates toward one of the donor's
/// k nearest same-cell neighbors, and labels the new row with the cell's
/// (g, y). Deterministic in (train, plan).
Dataset apply_plan(const Dataset& train, const OversamplePlan& plan);

}  // namespace fairsample
