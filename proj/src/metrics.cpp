#include "fairsample/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fairsample/errors.hpp"

namespace fairsample {

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den <= 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> ConfusionCells::tpr() const { return ratio(tp, tp + fn); }
std::optional<double> ConfusionCells::fpr() const { return ratio(fp, fp + tn); }
std::optional<double> ConfusionCells::tnr() const { return ratio(tn, tn + fp); }
std::optional<double> ConfusionCells::selection_rate() const {
    return ratio(tp + fp, total());
}

GroupConfusion confusion_by_group(std::span<const std::int8_t> y_true,
                                  std::span<const std::int8_t> y_pred,
                                  std::span<const std::int8_t> g) {
    if (y_true.size() != y_pred.size() || y_true.size() != g.size()) {
        throw ArgumentError("confusion_by_group: length mismatch");
    }
    if (y_true.empty()) {
        throw ArgumentError("confusion_by_group: empty input");
    }
    GroupConfusion gc;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ConfusionCells& c = g[i] ? gc.privileged : gc.unprivileged;
        if (y_true[i]) {
            (y_pred[i] ? c.tp : c.fn) += 1;
        } else {
            (y_pred[i] ? c.fp : c.tn) += 1;
        }
    }
    return gc;
}

double theil_index(std::span<const std::int8_t> y_true,
                   std::span<const std::int8_t> y_pred) {
    const std::size_t n = y_true.size();
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += static_cast<double>(y_pred[i] - y_true[i] + 1);
    }
    mu /= static_cast<double>(n);
    if (mu == 0.0) return 0.0;  // every benefit is 0, hence equal
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double b = static_cast<double>(y_pred[i] - y_true[i] + 1);
        if (b > 0.0) s += (b / mu) * std::log(b / mu);
    }
    return s / static_cast<double>(n);
}

FairnessReport fairness_report(const GroupConfusion& gc,
                               std::span<const std::int8_t> y_true,
                               std::span<const std::int8_t> y_pred) {
    FairnessReport r;
    const ConfusionCells& p = gc.privileged;
    const ConfusionCells& u = gc.unprivileged;

    const auto sel_p = p.selection_rate();
    const auto sel_u = u.selection_rate();
    if (sel_p && sel_u) {
        r.statistical_parity_difference = *sel_u - *sel_p;
        if (*sel_p > 0.0) {
            const double di = *sel_u / *sel_p;
            r.disparate_impact = di;
            r.di_measure = 1.0 - std::min(di, di > 0.0 ? 1.0 / di : 1.0);
        }
    }
    const auto tpr_p = p.tpr(), tpr_u = u.tpr();
    if (tpr_p && tpr_u) {
        r.equal_opportunity_difference = *tpr_u - *tpr_p;
        const auto fpr_p = p.fpr(), fpr_u = u.fpr();
        if (fpr_p && fpr_u) {
            r.average_odds_difference =
                0.5 * ((*fpr_u - *fpr_p) + (*tpr_u - *tpr_p));
        }
    }

    r.theil_index = theil_index(y_true, y_pred);

    const std::int64_t n = p.total() + u.total();
    r.accuracy = ratio(p.tp + p.tn + u.tp + u.tn, n);
    const ConfusionCells pooled{p.tp + u.tp, p.fp + u.fp, p.tn + u.tn,
                                p.fn + u.fn};
    const auto tpr = pooled.tpr();
    const auto tnr = pooled.tnr();
    if (tpr && tnr) r.balanced_accuracy = 0.5 * (*tpr + *tnr);
    return r;
}

FairnessReport fairness_report(std::span<const std::int8_t> y_true,
                               std::span<const std::int8_t> y_pred,
                               std::span<const std::int8_t> g) {
    return fairness_report(confusion_by_group(y_true, y_pred, g), y_true, y_pred);
}

double balanced_accuracy_threshold(
    std::span<const std::pair<double, FairnessReport>> sweep) {
    if (sweep.empty()) {
        throw ArgumentError("balanced_accuracy_threshold: empty sweep");
    }
    double best_threshold = sweep.front().first;
    std::optional<double> best;
    for (const auto& [t, report] : sweep) {
        if (!report.balanced_accuracy) continue;
        if (!best || *report.balanced_accuracy > *best) {
            best = *report.balanced_accuracy;
            best_threshold = t;
        }
    }
    return best_threshold;
}

}  // namespace fairsample
