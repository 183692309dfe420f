#include "fairsample/mitigators.hpp"

#include "fairsample/errors.hpp"

namespace fairsample {

Dataset reweigh(const Dataset& train) {
    const CellCounts c = cell_counts(train);
    const char* empty = nullptr;
    if (c.pf == 0) empty = "privileged-favorable";
    else if (c.pu == 0) empty = "privileged-unfavorable";
    else if (c.uf == 0) empty = "unprivileged-favorable";
    else if (c.uu == 0) empty = "unprivileged-unfavorable";
    if (empty) {
        throw ComputeError(std::string("reweigh: the ") + empty +
                           " cell is empty, its weight is undefined");
    }
    const double n = static_cast<double>(c.n());
    const double p_priv = static_cast<double>(c.n_privileged()) / n;
    const double p_fav = static_cast<double>(c.pf + c.uf) / n;
    auto weight = [&](std::int8_t g, std::int8_t y) {
        const double pg = g ? p_priv : 1.0 - p_priv;
        const double py = y ? p_fav : 1.0 - p_fav;
        const std::int64_t cell = g ? (y ? c.pf : c.pu) : (y ? c.uf : c.uu);
        return pg * py / (static_cast<double>(cell) / n);
    };
    Dataset out = train;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.w[i] = weight(out.g[i], out.y[i]);
    }
    return out;
}

std::vector<std::int8_t> reject_option(std::span<const double> scores,
                                       std::span<const std::int8_t> g,
                                       const RejectOptionParams& params) {
    if (scores.size() != g.size()) {
        throw ArgumentError("reject_option: length mismatch");
    }
    if (!(params.margin > 0.0 && params.margin <= 0.5)) {
        throw ArgumentError("reject_option: margin must lie in (0, 0.5]");
    }
    if (!(params.base_threshold >= 0.0 && params.base_threshold <= 1.0)) {
        throw ArgumentError("reject_option: base_threshold must lie in [0,1]");
    }
    const double lo = std::max(0.0, params.base_threshold - params.margin);
    const double hi = std::min(1.0, params.base_threshold + params.margin);
    std::vector<std::int8_t> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= lo && scores[i] <= hi) {
            labels[i] = g[i] ? 0 : 1;
        } else {
            labels[i] = scores[i] >= params.base_threshold ? 1 : 0;
        }
    }
    return labels;
}

}  // namespace fairsample
