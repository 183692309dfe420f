#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairsample/dataset.hpp"
#include "fairsample/divergence.hpp"
#include "fairsample/forest.hpp"
#include "fairsample/logreg.hpp"
#include "fairsample/metrics.hpp"
#include "fairsample/oversample.hpp"

namespace fairsample {

using ordered_json = nlohmann::ordered_json;

enum class ArmKind { Baseline, Oversample, Reweigh, RejectOption };
enum class ClassifierKind { LogReg, Forest };

struct ArmSpec {
    ArmKind kind = ArmKind::Baseline;
    Strategy strategy = Strategy::ExpandUnprivilegedFavored;  // Oversample only
    std::string name;  // as written in the config, e.g. "oversample:combined"
};

ArmSpec arm_from_string(const std::string& text);

/// Declarative description of one experiment: dataset, arms to compare,
/// classifier, repeated-run protocol, and threshold grid.
struct ExperimentConfig {
    std::string data_path;
    std::string schema_path;
    std::vector<ArmSpec> arms;
    ClassifierKind classifier = ClassifierKind::LogReg;
    LogRegParams logreg;
    ForestParams forest;
    int n_runs = 10;
    std::vector<std::uint64_t> seeds;  // empty means 0..n_runs-1
    double test_fraction = 0.3;
    double threshold_start = 0.0;
    double threshold_stop = 0.5;
    double threshold_step = 0.01;
    int k_neighbors = 5;
    double delta = 0.05;
    bool compute_divergence = true;
    std::vector<double> reject_margins = {0.05, 0.1, 0.15, 0.2};
    double accuracy_budget = 0.03;  // tolerated balanced-accuracy drop when
                                    // picking the reject-option margin

    static ExperimentConfig parse(std::istream& in, const std::string& origin);
    /// Parses a config file; data/schema paths are resolved relative to the
    /// config file's directory.
    static ExperimentConfig parse_file(const std::string& path);

    void validate() const;
    std::vector<std::uint64_t> effective_seeds() const;
    std::vector<double> threshold_grid() const;
    ordered_json to_json() const;
};

/// One sweep entry: (threshold, metrics at that threshold).
using ThresholdReport = std::pair<double, FairnessReport>;

struct RunResult {
    std::string arm;
    std::uint64_t seed = 0;
    std::uint64_t split_hash = 0;
    std::vector<ThresholdReport> sweep;
    double operating_threshold = 0.0;
    FairnessReport operating;
    std::optional<DivergenceReport> divergence;
    std::optional<OversamplePlan> plan;          // oversample arms
    std::optional<double> reject_margin;         // reject-option arms
};

/// One protocol pass: split, transform the train part per the arm, train,
/// sweep the threshold grid on test, pick the balanced-accuracy operating
/// point, and (optionally) measure the train-side group divergence.
/// Deterministic in (config, arm, seed).
RunResult run_arm(const ExperimentConfig& config, const ArmSpec& arm,
                  std::uint64_t seed, const Dataset& ds);

/// All (arm x seed) runs. Runs execute concurrently; output order is
/// (seed-major, arm-minor) regardless of scheduling.
std::vector<RunResult> run_all(const ExperimentConfig& config,
                               const Dataset& ds);

struct ExperimentSummary {
    ordered_json json;
    /// Per-arm plot-ready table: mean metric value per threshold.
    std::vector<std::pair<std::string, std::string>> sweep_csv;
};

/// Means, standard errors, and the pairwise paired-t-test table over runs.
/// Arms must have equal run counts and identical splits per seed.
ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<RunResult>& runs);

/// Load + run_all + summarize.
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace fairsample
