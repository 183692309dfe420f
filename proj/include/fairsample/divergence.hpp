#pragma once

#include <cstdint>

#include <json.hpp>

#include "fairsample/matrix.hpp"

namespace fairsample {

/// Empirical distribution-divergence estimate between two sample sets plus
/// the finite-sample bound terms derived from it. The ideal-joint-hypothesis
/// error (lambda) is unobservable and reported as such, never estimated.
struct DivergenceReport {
    double empirical_h_divergence = 0.0;  // in [0, 2]
    double complexity_term = 0.0;
    int vc_dim = 0;
    std::int64_t m = 0;  // per-side sample size used
    double delta = 0.0;
    double favorable_gap_bound = 0.0;
    double error_gap_bound_ex_lambda = 0.0;

    nlohmann::ordered_json to_json() const;
};

/// Proxy A-distance: subsample both sides to equal size, train a logistic
/// domain classifier to tell them apart, and return
/// max(0, 2 * (1 - 2 * held_out_error)). Zero means indistinguishable
/// samples, 2 means perfectly separable.
double empirical_h_divergence(const Matrix& side_a, const Matrix& side_b,
                              std::uint64_t seed);

/// 4 * sqrt((d * ln(2m) + ln(2/delta)) / m) - the finite-sample slack that
/// relates the empirical divergence to the true one with probability
/// at least 1 - delta. Strictly decreasing in m.
double complexity_term(int d, std::int64_t m, double delta);

/// Full report: divergence, complexity term at the per-side size actually
/// used, and the resulting bounds on the favorable-prediction gap and on the
/// predictive-error gap (the latter excluding the unobservable lambda).
DivergenceReport bounds_report(const Matrix& privileged_rows,
                               const Matrix& unprivileged_rows, int vc_dim,
                               double delta, std::uint64_t seed);

}  // namespace fairsample
