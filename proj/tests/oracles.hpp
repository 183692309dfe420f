#pragma once

// Independent test oracles. These deliberately avoid the library's confusion
// tables and closed forms: every quantity is recomputed by direct row
// enumeration or brute force so implementation bugs cannot cancel out.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "fairsample/metrics.hpp"

namespace oracle {

inline std::optional<double> frac(const std::vector<int>& num_rows,
                                  const std::vector<int>& den_rows) {
    // Shares a convention with the library only in spirit: rate = hits/rows.
    if (den_rows.empty()) return std::nullopt;
    double hits = 0;
    for (int v : num_rows) hits += v;
    return hits / static_cast<double>(den_rows.size());
}

struct Report {
    std::optional<double> spd, di, di_measure, aod, eod, theil, accuracy,
        balanced_accuracy;
};

inline Report row_enumeration_report(const std::vector<int>& y_true,
                                     const std::vector<int>& y_pred,
                                     const std::vector<int>& g) {
    const std::size_t n = y_true.size();
    auto rate = [&](auto include, auto hit) -> std::optional<double> {
        std::size_t members = 0, hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!include(i)) continue;
            ++members;
            hits += static_cast<std::size_t>(hit(i));
        }
        if (members == 0) return std::nullopt;
        return static_cast<double>(hits) / static_cast<double>(members);
    };

    auto sel = [&](int group) {
        return rate([&](std::size_t i) { return g[i] == group; },
                    [&](std::size_t i) { return y_pred[i] == 1; });
    };
    auto tpr = [&](int group) {
        return rate([&](std::size_t i) { return g[i] == group && y_true[i] == 1; },
                    [&](std::size_t i) { return y_pred[i] == 1; });
    };
    auto fpr = [&](int group) {
        return rate([&](std::size_t i) { return g[i] == group && y_true[i] == 0; },
                    [&](std::size_t i) { return y_pred[i] == 1; });
    };

    Report r;
    const auto sel_u = sel(0), sel_p = sel(1);
    if (sel_u && sel_p) {
        r.spd = *sel_u - *sel_p;
        if (*sel_p > 0.0) {
            r.di = *sel_u / *sel_p;
            const double folded = *r.di == 0.0
                                      ? 0.0
                                      : std::min(*r.di, 1.0 / *r.di);
            r.di_measure = 1.0 - folded;
        }
    }
    const auto tpr_u = tpr(0), tpr_p = tpr(1);
    if (tpr_u && tpr_p) r.eod = *tpr_u - *tpr_p;
    const auto fpr_u = fpr(0), fpr_p = fpr(1);
    if (tpr_u && tpr_p && fpr_u && fpr_p) {
        r.aod = 0.5 * ((*fpr_u - *fpr_p) + (*tpr_u - *tpr_p));
    }

    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += static_cast<double>(y_pred[i] - y_true[i] + 1);
    }
    mu /= static_cast<double>(n);
    if (mu == 0.0) {
        r.theil = 0.0;
    } else {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double b = static_cast<double>(y_pred[i] - y_true[i] + 1);
            if (b > 0.0) s += (b / mu) * std::log(b / mu);
        }
        r.theil = s / static_cast<double>(n);
    }

    r.accuracy = rate([](std::size_t) { return true; },
                      [&](std::size_t i) { return y_pred[i] == y_true[i]; });
    const auto tpr_pool =
        rate([&](std::size_t i) { return y_true[i] == 1; },
             [&](std::size_t i) { return y_pred[i] == 1; });
    const auto tnr_pool =
        rate([&](std::size_t i) { return y_true[i] == 0; },
             [&](std::size_t i) { return y_pred[i] == 0; });
    if (tpr_pool && tnr_pool) {
        r.balanced_accuracy = 0.5 * (*tpr_pool + *tnr_pool);
    }
    return r;
}

inline bool matches(const std::optional<double>& a,
                    const std::optional<double>& b, double tol = 1e-12) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return std::abs(*a - *b) <= tol;
}

inline bool report_matches(const fairsample::FairnessReport& lib,
                           const Report& ref, double tol = 1e-12) {
    return matches(lib.statistical_parity_difference, ref.spd, tol) &&
           matches(lib.disparate_impact, ref.di, tol) &&
           matches(lib.di_measure, ref.di_measure, tol) &&
           matches(lib.average_odds_difference, ref.aod, tol) &&
           matches(lib.equal_opportunity_difference, ref.eod, tol) &&
           matches(lib.theil_index, ref.theil, tol) &&
           matches(lib.accuracy, ref.accuracy, tol) &&
           matches(lib.balanced_accuracy, ref.balanced_accuracy, tol);
}

}  // namespace oracle
