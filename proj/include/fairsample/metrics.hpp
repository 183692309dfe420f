#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fairsample {

struct ConfusionCells {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    std::optional<double> tpr() const;             // TP / (TP + FN)
    std::optional<double> fpr() const;             // FP / (FP + TN)
    std::optional<double> tnr() const;             // TN / (TN + FP)
    std::optional<double> selection_rate() const;  // (TP + FP) / total
};

struct GroupConfusion {
    ConfusionCells privileged;
    ConfusionCells unprivileged;
};

/// Fairness and accuracy battery at one operating point. A disengaged field
/// means the quantity is undefined for this input (zero-denominator rate or
/// an empty group) - undefined is never silently reported as zero.
struct FairnessReport {
    std::optional<double> statistical_parity_difference;  // sel_u - sel_p
    std::optional<double> disparate_impact;               // sel_u / sel_p
    std::optional<double> di_measure;                     // 1 - min(DI, 1/DI)
    std::optional<double> average_odds_difference;
    std::optional<double> equal_opportunity_difference;   // TPR_u - TPR_p
    std::optional<double> theil_index;
    std::optional<double> accuracy;
    std::optional<double> balanced_accuracy;              // (TPR + TNR) / 2, pooled
};

GroupConfusion confusion_by_group(std::span<const std::int8_t> y_true,
                                  std::span<const std::int8_t> y_pred,
                                  std::span<const std::int8_t> g);

FairnessReport fairness_report(const GroupConfusion& gc,
                               std::span<const std::int8_t> y_true,
                               std::span<const std::int8_t> y_pred);

/// Convenience: confusion + report in one call.
FairnessReport fairness_report(std::span<const std::int8_t> y_true,
                               std::span<const std::int8_t> y_pred,
                               std::span<const std::int8_t> g);

/// Generalized-entropy inequality index over benefits b_i = yhat - y + 1,
/// with the 0 ln 0 = 0 convention. Zero iff every b_i is equal.
double theil_index(std::span<const std::int8_t> y_true,
                   std::span<const std::int8_t> y_pred);

/// The threshold whose report has the highest balanced accuracy; ties break
/// toward the lower threshold. Entries with undefined balanced accuracy are
/// skipped unless all are undefined.
double balanced_accuracy_threshold(
    std::span<const std::pair<double, FairnessReport>> sweep);

}  // namespace fairsample
