#include "fairsample/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairsample/errors.hpp"
#include "fairsample/logreg.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

nlohmann::ordered_json DivergenceReport::to_json() const {
    nlohmann::ordered_json j;
    j["empirical_h_divergence"] = empirical_h_divergence;
    j["complexity_term"] = complexity_term;
    j["vc_dim"] = vc_dim;
    j["m"] = m;
    j["delta"] = delta;
    j["favorable_gap_bound"] = favorable_gap_bound;
    j["error_gap_bound_ex_lambda"] = error_gap_bound_ex_lambda;
    j["lambda"] = "unobservable";
    return j;
}

namespace {

// First `m` row indices of a seeded shuffle of 0..n-1.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m,
                                           Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(m);
    return idx;
}

}  // namespace

double empirical_h_divergence(const Matrix& side_a, const Matrix& side_b,
                              std::uint64_t seed) {
    if (side_a.rows < 4 || side_b.rows < 4) {
        throw InsufficientSampleError(
            "empirical_h_divergence needs at least 4 rows per side (got " +
            std::to_string(side_a.rows) + " and " + std::to_string(side_b.rows) +
            ")");
    }
    if (side_a.cols != side_b.cols) {
        throw ArgumentError("empirical_h_divergence: feature dimensions differ");
    }
    const std::size_t m = std::min(side_a.rows, side_b.rows);

    Rng rng(Rng::mix(seed) ^ 0x5eedULL);
    const auto idx_a = subsample_indices(side_a.rows, m, rng);
    const auto idx_b = subsample_indices(side_b.rows, m, rng);

    // Stratified 50/50 split of each side keeps the held-out set balanced.
    const std::size_t train_per_side = (m + 1) / 2;
    Dataset domain_train, domain_test;
    domain_train.X = Matrix(0, side_a.cols);
    domain_test.X = Matrix(0, side_a.cols);
    auto add = [&](const Matrix& src, std::size_t row, std::int8_t label,
                   bool to_train) {
        Dataset& dst = to_train ? domain_train : domain_test;
        dst.X.push_row(src.row_span(row));
        dst.y.push_back(label);
        dst.g.push_back(0);
        dst.w.push_back(1.0);
    };
    for (std::size_t i = 0; i < m; ++i) {
        add(side_a, idx_a[i], 0, i < train_per_side);
        add(side_b, idx_b[i], 1, i < train_per_side);
    }

    const LogRegModel domain_classifier = train_logreg(domain_train, {});
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < domain_test.size(); ++i) {
        const int predicted =
            domain_classifier.score(domain_test.X.row_span(i)) >= 0.5 ? 1 : 0;
        wrong += static_cast<std::size_t>(predicted != domain_test.y[i]);
    }
    const double err =
        static_cast<double>(wrong) / static_cast<double>(domain_test.size());
    return std::max(0.0, 2.0 * (1.0 - 2.0 * err));
}

double complexity_term(int d, std::int64_t m, double delta) {
    if (d < 1) throw ArgumentError("complexity_term: d must be positive");
    if (m < 1) throw ArgumentError("complexity_term: m must be positive");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ArgumentError("complexity_term: delta must lie in (0,1)");
    }
    const double md = static_cast<double>(m);
    return 4.0 * std::sqrt((static_cast<double>(d) * std::log(2.0 * md) +
                            std::log(2.0 / delta)) /
                           md);
}

DivergenceReport bounds_report(const Matrix& privileged_rows,
                               const Matrix& unprivileged_rows, int vc_dim,
                               double delta, std::uint64_t seed) {
    DivergenceReport r;
    r.empirical_h_divergence =
        empirical_h_divergence(privileged_rows, unprivileged_rows, seed);
    r.m = static_cast<std::int64_t>(
        std::min(privileged_rows.rows, unprivileged_rows.rows));
    r.vc_dim = vc_dim;
    r.delta = delta;
    r.complexity_term = complexity_term(vc_dim, r.m, delta);
    r.favorable_gap_bound =
        0.5 * r.empirical_h_divergence + 0.5 * r.complexity_term;
    r.error_gap_bound_ex_lambda = r.favorable_gap_bound;
    return r;
}

}  // namespace fairsample
