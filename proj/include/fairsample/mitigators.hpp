#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

/// Pre-processing mitigator: replaces instance weights with
/// w = P(g) * P(y) / P(g, y) (empirical frequencies), which decorrelates
/// group and label in the weighted data. Features and labels are untouched.
Dataset reweigh(const Dataset& train);

struct RejectOptionParams {
    double margin = 0.1;          // in (0, 0.5]
    double base_threshold = 0.5;  // in [0, 1]
};

/// Post-processing mitigator: outside the critical band predictions follow
/// score >= base_threshold; inside [base_threshold - margin,
/// base_threshold + margin] (inclusive, clipped to [0,1]) unprivileged rows
/// get the favorable label and privileged rows the unfavorable one.
std::vector<std::int8_t> reject_option(std::span<const double> scores,
                                       std::span<const std::int8_t> g,
                                       const RejectOptionParams& params);

}  // namespace fairsample
