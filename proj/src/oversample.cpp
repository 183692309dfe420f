#include "fairsample/oversample.hpp"

#include <algorithm>
#include <unordered_map>

#include "fairsample/errors.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::ExpandUnprivilegedFavored:
            return "expand-unprivileged-favored";
        case Strategy::ExpandPrivilegedUnfavored:
            return "expand-privileged-unfavored";
        case Strategy::Combined:
            return "combined";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "expand-unprivileged-favored")
        return Strategy::ExpandUnprivilegedFavored;
    if (name == "expand-privileged-unfavored")
        return Strategy::ExpandPrivilegedUnfavored;
    if (name == "combined") return Strategy::Combined;
    throw ArgumentError("unknown strategy '" + name + "'");
}

namespace {

// ceil(a / b) for a >= 0, b > 0.
std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return (a + b - 1) / b;
}

}  // namespace

CellTargets target_counts(const CellCounts& cells, Strategy strategy) {
    const std::int64_t np = cells.n_privileged();
    const std::int64_t nu = cells.n_unprivileged();
    if (np == 0 || nu == 0) {
        throw ArgumentError("target_counts: both groups must be nonempty");
    }
    CellTargets t;
    // Common numerator of all three closed forms:
    // positive exactly when r_p > r_u.
    const std::int64_t gap = cells.pf * nu - cells.uf * np;
    if (gap <= 0) return t;  // disadvantaged direction already holds

    switch (strategy) {
        case Strategy::ExpandUnprivilegedFavored:
            // (UF + x) / (nu + x) >= r_p  =>  x >= gap / pu
            if (cells.pu == 0) {
                throw UnreachableTargetError(
                    "privileged base rate is 1; no finite number of synthetic "
                    "unprivileged-favorable rows can reach it");
            }
            t.unprivileged_favored = ceil_div(gap, cells.pu);
            break;
        case Strategy::ExpandPrivilegedUnfavored:
            // PF / (np + x) <= r_u  =>  x >= gap / uf
            if (cells.uf == 0) {
                throw UnreachableTargetError(
                    "unprivileged base rate is 0; no finite number of synthetic "
                    "privileged-unfavorable rows can reach it");
            }
            t.privileged_unfavored = ceil_div(gap, cells.uf);
            break;
        case Strategy::Combined: {
            // Meet at the pooled favorable rate rbar = (pf+uf)/n from both
            // sides; rbar lies strictly between r_u and r_p here, so both
            // denominators are positive.
            const std::int64_t favored = cells.pf + cells.uf;
            const std::int64_t unfavored = cells.pu + cells.uu;
            t.unprivileged_favored = ceil_div(gap, unfavored);
            t.privileged_unfavored = ceil_div(gap, favored);
            break;
        }
    }
    return t;
}

nlohmann::ordered_json OversamplePlan::to_json() const {
    nlohmann::ordered_json j;
    j["strategy"] = to_string(strategy);
    j["k_neighbors"] = k_neighbors;
    j["seed"] = seed;
    j["targets"] = {{"unprivileged_favored", targets.unprivileged_favored},
                    {"privileged_unfavored", targets.privileged_unfavored}};
    return j;
}

OversamplePlan OversamplePlan::from_json(const nlohmann::ordered_json& j) {
    OversamplePlan p;
    p.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    p.k_neighbors = j.at("k_neighbors").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.targets.unprivileged_favored =
        j.at("targets").at("unprivileged_favored").get<std::int64_t>();
    p.targets.privileged_unfavored =
        j.at("targets").at("privileged_unfavored").get<std::int64_t>();
    return p;
}

OversamplePlan make_plan(const CellCounts& cells, Strategy strategy,
                         int k_neighbors, std::uint64_t seed) {
    if (k_neighbors < 1) {
        throw ArgumentError("k_neighbors must be at least 1");
    }
    OversamplePlan plan;
    plan.strategy = strategy;
    plan.k_neighbors = k_neighbors;
    plan.seed = seed;
    plan.targets = target_counts(cells, strategy);
    if (plan.targets.unprivileged_favored > 0 && cells.uf < 2) {
        throw InsufficientSupportError(
            "unprivileged-favorable cell has " + std::to_string(cells.uf) +
            " member(s); SMOTE needs at least 2");
    }
    if (plan.targets.privileged_unfavored > 0 && cells.pu < 2) {
        throw InsufficientSupportError(
            "privileged-unfavorable cell has " + std::to_string(cells.pu) +
            " member(s); SMOTE needs at least 2");
    }
    return plan;
}

NeighborResult nearest_neighbors(const Matrix& points, std::size_t query,
                                 std::size_t k) {
    if (k < 1) throw ArgumentError("nearest_neighbors: k must be at least 1");
    if (query >= points.rows) {
        throw ArgumentError("nearest_neighbors: query index out of range");
    }
    NeighborResult out;
    const std::size_t candidates = points.rows - 1;
    if (candidates < k) {
        out.truncated = true;
        k = candidates;
    }
    if (k == 0) return out;

    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(candidates);
    for (std::size_t i = 0; i < points.rows; ++i) {
        if (i == query) continue;
        dist.emplace_back(squared_distance(points.row_span(i),
                                           points.row_span(query)),
                          i);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    out.indices.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.indices.push_back(dist[i].second);
    return out;
}

std::vector<double> smote_sample(std::span<const double> x,
                                 std::span<const double> x_nn, double u,
                                 const Encoding& enc) {
    if (x.size() != x_nn.size() || x.size() != enc.dim) {
        throw ArgumentError("smote_sample: dimension mismatch");
    }
    if (!(u >= 0.0 && u <= 1.0)) {
        throw ArgumentError("smote_sample: u must lie in [0,1]");
    }
    std::vector<double> out(x.size());
    for (const ColumnEncoding& fe : enc.features) {
        if (fe.kind == ColumnKind::Numeric) {
            const std::size_t j = fe.offset;
            out[j] = x[j] + u * (x_nn[j] - x[j]);
        } else {
            std::span<const double> src = u < 0.5 ? x : x_nn;
            for (std::size_t j = fe.offset; j < fe.offset + fe.width; ++j) {
                out[j] = src[j];
            }
        }
    }
    return out;
}

Dataset apply_plan(const Dataset& train, const OversamplePlan& plan) {
    if (plan.k_neighbors < 1) {
        throw ArgumentError("apply_plan: k_neighbors must be at least 1");
    }
    Dataset out = train;

    struct CellJob {
        std::int64_t target;
        std::int8_t g, y;
        std::size_t cell_id;  // g*2 + y, salts the cell's rng stream
        const char* name;
    };
    const CellJob jobs[] = {
        {plan.targets.unprivileged_favored, 0, 1, 1, "unprivileged-favorable"},
        {plan.targets.privileged_unfavored, 1, 0, 2, "privileged-unfavorable"},
    };

    for (const CellJob& job : jobs) {
        if (job.target <= 0) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (train.g[i] == job.g && train.y[i] == job.y) members.push_back(i);
        }
        if (members.size() < 2) {
            throw InsufficientSupportError(
                std::string(job.name) + " cell has " +
                std::to_string(members.size()) +
                " member(s); SMOTE needs at least 2");
        }
        const Matrix cell = train.X.take(members);
        const std::size_t k =
            std::min<std::size_t>(static_cast<std::size_t>(plan.k_neighbors),
                                  members.size() - 1);
        Rng rng(plan.seed ^ job.cell_id);
        std::unordered_map<std::size_t, std::vector<std::size_t>> knn_cache;
        for (std::int64_t s = 0; s < job.target; ++s) {
            const std::size_t donor = rng.below(members.size());
            auto it = knn_cache.find(donor);
            if (it == knn_cache.end()) {
                it = knn_cache
                         .emplace(donor,
                                  nearest_neighbors(cell, donor, k).indices)
                         .first;
            }
            const auto& nn = it->second;
            const std::size_t pick = nn[rng.below(nn.size())];
            const double u = rng.u01();
            const auto row =
                smote_sample(cell.row_span(donor), cell.row_span(pick), u,
                             train.enc);
            out.X.push_row(row);
            out.y.push_back(job.y);
            out.g.push_back(job.g);
            out.w.push_back(1.0);
        }
    }
    return out;
}

}  // namespace fairsample
