#include "fairsample/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "fairsample/csv.hpp"
#include "fairsample/errors.hpp"
#include "fairsample/mitigators.hpp"
#include "fairsample/model.hpp"
#include "fairsample/stats.hpp"

namespace fairsample {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + v + "' as a number for '" + key +
                          "'");
    }
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::int64_t i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + v + "' as an integer for '" + key +
                          "'");
    }
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

ordered_json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

ArmSpec arm_from_string(const std::string& text) {
    ArmSpec a;
    a.name = text;
    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "baseline") {
        a.kind = ArmKind::Baseline;
    } else if (head == "oversample") {
        a.kind = ArmKind::Oversample;
        if (colon != std::string::npos) {
            a.strategy = strategy_from_string(text.substr(colon + 1));
        } else {
            a.name = "oversample:" + to_string(a.strategy);
        }
    } else if (head == "reweigh") {
        a.kind = ArmKind::Reweigh;
    } else if (head == "reject-option") {
        a.kind = ArmKind::RejectOption;
    } else {
        throw ConfigError("unknown arm '" + text + "'");
    }
    if (a.kind != ArmKind::Oversample && colon != std::string::npos) {
        throw ConfigError("arm '" + head + "' takes no ':' qualifier");
    }
    return a;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in,
                                         const std::string& origin) {
    ExperimentConfig c;
    bool seeds_given = false;
    bool n_runs_given = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": empty value for '" + key + "'");
        }
        if (key == "data") {
            c.data_path = value;
        } else if (key == "schema") {
            c.schema_path = value;
        } else if (key == "arm") {
            c.arms.push_back(arm_from_string(value));
        } else if (key == "classifier") {
            if (value == "logreg") {
                c.classifier = ClassifierKind::LogReg;
            } else if (value == "forest") {
                c.classifier = ClassifierKind::Forest;
            } else {
                throw ConfigError(origin + ": unknown classifier '" + value +
                                  "' (use logreg or forest)");
            }
        } else if (key == "n_runs") {
            c.n_runs = static_cast<int>(parse_int(value, key));
            n_runs_given = true;
        } else if (key == "seeds") {
            c.seeds.clear();
            for (const auto& s : split_list(value)) {
                c.seeds.push_back(
                    static_cast<std::uint64_t>(parse_int(s, key)));
            }
            seeds_given = true;
        } else if (key == "test_fraction") {
            c.test_fraction = parse_double(value, key);
        } else if (key == "threshold_start") {
            c.threshold_start = parse_double(value, key);
        } else if (key == "threshold_stop") {
            c.threshold_stop = parse_double(value, key);
        } else if (key == "threshold_step") {
            c.threshold_step = parse_double(value, key);
        } else if (key == "k_neighbors") {
            c.k_neighbors = static_cast<int>(parse_int(value, key));
        } else if (key == "delta") {
            c.delta = parse_double(value, key);
        } else if (key == "divergence") {
            if (value == "on" || value == "true") {
                c.compute_divergence = true;
            } else if (value == "off" || value == "false") {
                c.compute_divergence = false;
            } else {
                throw ConfigError(origin + ": divergence must be on or off");
            }
        } else if (key == "learning_rate") {
            c.logreg.learning_rate = parse_double(value, key);
        } else if (key == "l2") {
            c.logreg.l2 = parse_double(value, key);
        } else if (key == "max_iters") {
            c.logreg.max_iters = static_cast<int>(parse_int(value, key));
        } else if (key == "tol") {
            c.logreg.tol = parse_double(value, key);
        } else if (key == "n_trees") {
            c.forest.n_trees = static_cast<int>(parse_int(value, key));
        } else if (key == "max_depth") {
            c.forest.max_depth = static_cast<int>(parse_int(value, key));
        } else if (key == "min_leaf") {
            c.forest.min_leaf = static_cast<int>(parse_int(value, key));
        } else if (key == "features_per_split") {
            c.forest.features_per_split =
                static_cast<int>(parse_int(value, key));
        } else if (key == "reject_margins") {
            c.reject_margins.clear();
            for (const auto& s : split_list(value)) {
                c.reject_margins.push_back(parse_double(s, key));
            }
        } else if (key == "accuracy_budget") {
            c.accuracy_budget = parse_double(value, key);
        } else {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
    if (seeds_given) {
        if (n_runs_given &&
            c.seeds.size() != static_cast<std::size_t>(c.n_runs)) {
            throw ConfigError(origin + ": seeds list length must equal n_runs");
        }
        c.n_runs = static_cast<int>(c.seeds.size());
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    ExperimentConfig c = parse(in, path);
    const auto dir = std::filesystem::path(path).parent_path();
    auto resolve = [&dir](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative()) {
            p = (dir / p).string();
        }
    };
    resolve(c.data_path);
    resolve(c.schema_path);
    return c;
}

void ExperimentConfig::validate() const {
    if (data_path.empty()) throw ConfigError("config: 'data' is required");
    if (schema_path.empty()) throw ConfigError("config: 'schema' is required");
    if (arms.empty()) throw ConfigError("config: at least one 'arm' is required");
    if (n_runs < 1) throw ConfigError("config: n_runs must be at least 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("config: test_fraction must lie in (0,1)");
    }
    if (!(threshold_step > 0.0)) {
        throw ConfigError("config: threshold_step must be positive");
    }
    if (threshold_start > threshold_stop) {
        throw ConfigError("config: threshold_start must not exceed threshold_stop");
    }
    if (threshold_start < 0.0 || threshold_stop > 1.0) {
        throw ConfigError("config: threshold grid must lie within [0,1]");
    }
    if (k_neighbors < 1) throw ConfigError("config: k_neighbors must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ConfigError("config: delta must lie in (0,1)");
    }
    if (reject_margins.empty()) {
        throw ConfigError("config: reject_margins must not be empty");
    }
    for (double m : reject_margins) {
        if (!(m > 0.0 && m <= 0.5)) {
            throw ConfigError("config: reject margins must lie in (0, 0.5]");
        }
    }
    for (const auto& a : arms) {
        for (const auto& b : arms) {
            if (&a != &b && a.name == b.name) {
                throw ConfigError("config: duplicate arm '" + a.name + "'");
            }
        }
    }
}

std::vector<std::uint64_t> ExperimentConfig::effective_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> s(static_cast<std::size_t>(n_runs));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
    return s;
}

std::vector<double> ExperimentConfig::threshold_grid() const {
    std::vector<double> grid;
    const int count = static_cast<int>(
        std::floor((threshold_stop - threshold_start) / threshold_step + 0.5));
    for (int i = 0; i <= count; ++i) {
        grid.push_back(threshold_start + static_cast<double>(i) * threshold_step);
    }
    return grid;
}

ordered_json ExperimentConfig::to_json() const {
    ordered_json arms_json = ordered_json::array();
    for (const auto& a : arms) arms_json.push_back(a.name);
    ordered_json j;
    j["data"] = data_path;
    j["schema"] = schema_path;
    j["arms"] = arms_json;
    j["classifier"] =
        classifier == ClassifierKind::LogReg ? "logreg" : "forest";
    if (classifier == ClassifierKind::LogReg) {
        j["params"] = {{"learning_rate", logreg.learning_rate},
                       {"l2", logreg.l2},
                       {"max_iters", logreg.max_iters},
                       {"tol", logreg.tol}};
    } else {
        j["params"] = {{"n_trees", forest.n_trees},
                       {"max_depth", forest.max_depth},
                       {"min_leaf", forest.min_leaf},
                       {"features_per_split", forest.features_per_split}};
    }
    j["n_runs"] = n_runs;
    j["seeds"] = effective_seeds();
    j["test_fraction"] = test_fraction;
    j["threshold_grid"] = {{"start", threshold_start},
                           {"stop", threshold_stop},
                           {"step", threshold_step}};
    j["k_neighbors"] = k_neighbors;
    j["delta"] = delta;
    j["divergence"] = compute_divergence;
    j["reject_margins"] = reject_margins;
    j["accuracy_budget"] = accuracy_budget;
    return j;
}

namespace {

Model train_model(const ExperimentConfig& config, const Dataset& train,
                  std::uint64_t seed) {
    Model m;
    m.seed = seed;
    if (config.classifier == ClassifierKind::LogReg) {
        m.impl = train_logreg(train, config.logreg);
    } else {
        ForestParams p = config.forest;
        p.seed = seed;
        m.impl = train_forest(train, p);
    }
    return m;
}

std::vector<ThresholdReport> sweep_plain(const std::vector<double>& grid,
                                         std::span<const double> scores,
                                         const Dataset& test) {
    std::vector<ThresholdReport> sweep;
    sweep.reserve(grid.size());
    for (double t : grid) {
        const auto y_pred = predict(scores, t);
        sweep.push_back({t, fairness_report(test.y, y_pred, test.g)});
    }
    return sweep;
}

std::vector<ThresholdReport> sweep_reject(const std::vector<double>& grid,
                                          std::span<const double> scores,
                                          const Dataset& test, double margin) {
    std::vector<ThresholdReport> sweep;
    sweep.reserve(grid.size());
    for (double t : grid) {
        const auto y_pred = reject_option(scores, test.g, {margin, t});
        sweep.push_back({t, fairness_report(test.y, y_pred, test.g)});
    }
    return sweep;
}

const FairnessReport& report_at(const std::vector<ThresholdReport>& sweep,
                                double threshold) {
    for (const auto& tr : sweep) {
        if (tr.first == threshold) return tr.second;
    }
    throw ComputeError("operating threshold missing from sweep");
}

}  // namespace

RunResult run_arm(const ExperimentConfig& config, const ArmSpec& arm,
                  std::uint64_t seed, const Dataset& ds) {
    RunResult result;
    result.arm = arm.name;
    result.seed = seed;

    auto parts = split_with_indices(ds, config.test_fraction, seed);
    result.split_hash = split_fingerprint(parts.test_indices);
    const Dataset& test = parts.test;

    Dataset train = std::move(parts.train);
    switch (arm.kind) {
        case ArmKind::Baseline:
        case ArmKind::RejectOption:
            break;
        case ArmKind::Oversample: {
            const OversamplePlan plan = make_plan(
                cell_counts(train), arm.strategy, config.k_neighbors, seed);
            train = apply_plan(train, plan);
            result.plan = plan;
            break;
        }
        case ArmKind::Reweigh:
            train = reweigh(train);
            break;
    }

    const Model model = train_model(config, train, seed);
    const std::vector<double> scores = model.score_all(test.X);
    const std::vector<double> grid = config.threshold_grid();

    if (arm.kind == ArmKind::RejectOption) {
        // Sweep each candidate margin; keep the fairest operating point whose
        // balanced accuracy stays within the budget of the plain model's best.
        const auto plain = sweep_plain(grid, scores, test);
        const auto& plain_best =
            report_at(plain, balanced_accuracy_threshold(plain));
        const double reference_balacc =
            plain_best.balanced_accuracy.value_or(0.0);

        struct Candidate {
            double margin;
            std::vector<ThresholdReport> sweep;
            double operating_threshold;
            bool eligible;
            double di;
        };
        std::vector<Candidate> candidates;
        for (double margin : config.reject_margins) {
            Candidate c;
            c.margin = margin;
            c.sweep = sweep_reject(grid, scores, test, margin);
            c.operating_threshold = balanced_accuracy_threshold(c.sweep);
            const FairnessReport& rep = report_at(c.sweep, c.operating_threshold);
            c.eligible = rep.balanced_accuracy.value_or(0.0) >=
                         reference_balacc - config.accuracy_budget;
            c.di = rep.di_measure.value_or(
                std::numeric_limits<double>::infinity());
            candidates.push_back(std::move(c));
        }
        std::size_t chosen = 0;  // fall back to the first margin
        bool found = false;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!candidates[i].eligible) continue;
            if (!found || candidates[i].di < candidates[chosen].di) {
                chosen = i;
                found = true;
            }
        }
        Candidate& pick = candidates[chosen];
        result.sweep = std::move(pick.sweep);
        result.operating_threshold = pick.operating_threshold;
        result.operating = report_at(result.sweep, result.operating_threshold);
        result.reject_margin = pick.margin;
    } else {
        result.sweep = sweep_plain(grid, scores, test);
        result.operating_threshold = balanced_accuracy_threshold(result.sweep);
        result.operating = report_at(result.sweep, result.operating_threshold);
    }

    if (config.compute_divergence) {
        std::vector<std::size_t> priv, unpriv;
        for (std::size_t i = 0; i < train.size(); ++i) {
            (train.g[i] ? priv : unpriv).push_back(i);
        }
        const Matrix up = train.X.take(priv);
        const Matrix uu = train.X.take(unpriv);
        result.divergence = bounds_report(
            up, uu, static_cast<int>(train.dim()) + 1, config.delta, seed);
    }
    return result;
}

std::vector<RunResult> run_all(const ExperimentConfig& config,
                               const Dataset& ds) {
    const auto seeds = config.effective_seeds();
    struct Job {
        const ArmSpec* arm;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::uint64_t seed : seeds) {
        for (const auto& arm : config.arms) jobs.push_back({&arm, seed});
    }

    std::vector<RunResult> results(jobs.size());
    std::vector<std::future<void>> futures;
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                              jobs.size());
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                try {
                    results[i] = run_arm(config, *jobs[i].arm, jobs[i].seed, ds);
                } catch (const ValidationError& e) {
                    throw ValidationError("arm '" + jobs[i].arm->name +
                                          "', seed " +
                                          std::to_string(jobs[i].seed) + ": " +
                                          e.what());
                } catch (const ComputeError& e) {
                    throw ComputeError("arm '" + jobs[i].arm->name + "', seed " +
                                       std::to_string(jobs[i].seed) + ": " +
                                       e.what());
                }
            }
        }));
    }
    std::exception_ptr first_error;
    for (auto& f : futures) {
        try {
            f.get();
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

namespace {

struct MetricAccess {
    const char* name;
    std::optional<double> (*get)(const RunResult&);
};

std::optional<double> metric_abs(std::optional<double> v) {
    if (!v) return std::nullopt;
    return std::abs(*v);
}

const MetricAccess kMetrics[] = {
    {"accuracy", [](const RunResult& r) { return r.operating.accuracy; }},
    {"balanced_accuracy",
     [](const RunResult& r) { return r.operating.balanced_accuracy; }},
    {"di_measure", [](const RunResult& r) { return r.operating.di_measure; }},
    {"disparate_impact",
     [](const RunResult& r) { return r.operating.disparate_impact; }},
    {"statistical_parity_difference",
     [](const RunResult& r) {
         return r.operating.statistical_parity_difference;
     }},
    {"average_odds_difference",
     [](const RunResult& r) { return r.operating.average_odds_difference; }},
    {"abs_average_odds_difference",
     [](const RunResult& r) {
         return metric_abs(r.operating.average_odds_difference);
     }},
    {"equal_opportunity_difference",
     [](const RunResult& r) {
         return r.operating.equal_opportunity_difference;
     }},
    {"theil_index", [](const RunResult& r) { return r.operating.theil_index; }},
    {"operating_threshold",
     [](const RunResult& r) -> std::optional<double> {
         return r.operating_threshold;
     }},
    {"empirical_h_divergence",
     [](const RunResult& r) -> std::optional<double> {
         if (!r.divergence) return std::nullopt;
         return r.divergence->empirical_h_divergence;
     }},
};

ordered_json report_json(const FairnessReport& r) {
    ordered_json j;
    j["statistical_parity_difference"] = opt_json(r.statistical_parity_difference);
    j["disparate_impact"] = opt_json(r.disparate_impact);
    j["di_measure"] = opt_json(r.di_measure);
    j["average_odds_difference"] = opt_json(r.average_odds_difference);
    j["equal_opportunity_difference"] = opt_json(r.equal_opportunity_difference);
    j["theil_index"] = opt_json(r.theil_index);
    j["accuracy"] = opt_json(r.accuracy);
    j["balanced_accuracy"] = opt_json(r.balanced_accuracy);
    return j;
}

std::string sweep_csv_text(const std::vector<const RunResult*>& runs) {
    // Mean of each metric across runs, per threshold; blank when undefined in
    // every run.
    std::ostringstream out;
    out << "threshold,accuracy,balanced_accuracy,di,AOD,SPD,EOD,Theil\n";
    if (runs.empty()) return out.str();
    const std::size_t n_thresholds = runs.front()->sweep.size();
    for (std::size_t t = 0; t < n_thresholds; ++t) {
        const double threshold = runs.front()->sweep[t].first;
        auto cell = [&](std::optional<double> (*get)(const FairnessReport&)) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const RunResult* r : runs) {
                const auto v = get(r->sweep[t].second);
                if (v) {
                    sum += *v;
                    ++count;
                }
            }
            return count ? csv::format_double(sum / static_cast<double>(count))
                         : std::string();
        };
        out << csv::format_double(threshold) << ','
            << cell([](const FairnessReport& r) { return r.accuracy; }) << ','
            << cell([](const FairnessReport& r) { return r.balanced_accuracy; })
            << ','
            << cell([](const FairnessReport& r) { return r.di_measure; }) << ','
            << cell([](const FairnessReport& r) {
                   return r.average_odds_difference;
               })
            << ','
            << cell([](const FairnessReport& r) {
                   return r.statistical_parity_difference;
               })
            << ','
            << cell([](const FairnessReport& r) {
                   return r.equal_opportunity_difference;
               })
            << ','
            << cell([](const FairnessReport& r) { return r.theil_index; })
            << '\n';
    }
    return out.str();
}

}  // namespace

ExperimentSummary summarize(const ExperimentConfig& config,
                            const std::vector<RunResult>& runs) {
    if (runs.empty()) throw ArgumentError("summarize: no runs");
    // Group runs per arm, preserving seed order.
    std::vector<std::vector<const RunResult*>> by_arm(config.arms.size());
    for (const RunResult& r : runs) {
        bool placed = false;
        for (std::size_t a = 0; a < config.arms.size(); ++a) {
            if (config.arms[a].name == r.arm) {
                by_arm[a].push_back(&r);
                placed = true;
                break;
            }
        }
        if (!placed) throw PairingError("run for unknown arm '" + r.arm + "'");
    }
    const std::size_t n_runs = by_arm.front().size();
    for (std::size_t a = 0; a < by_arm.size(); ++a) {
        if (by_arm[a].size() != n_runs) {
            throw PairingError("arm '" + config.arms[a].name + "' has " +
                               std::to_string(by_arm[a].size()) +
                               " runs, expected " + std::to_string(n_runs));
        }
    }
    // Paired arms must have seen identical splits, seed by seed.
    for (std::size_t i = 0; i < n_runs; ++i) {
        for (std::size_t a = 1; a < by_arm.size(); ++a) {
            if (by_arm[a][i]->seed != by_arm[0][i]->seed ||
                by_arm[a][i]->split_hash != by_arm[0][i]->split_hash) {
                throw PairingError(
                    "arms '" + config.arms[0].name + "' and '" +
                    config.arms[a].name +
                    "' disagree on the split for run " + std::to_string(i));
            }
        }
    }

    ordered_json root;
    root["config"] = config.to_json();
    ordered_json arms_json = ordered_json::array();
    for (std::size_t a = 0; a < by_arm.size(); ++a) {
        ordered_json arm;
        arm["name"] = config.arms[a].name;
        ordered_json runs_json = ordered_json::array();
        for (const RunResult* r : by_arm[a]) {
            ordered_json rj;
            rj["seed"] = r->seed;
            rj["split"] = hex64(r->split_hash);
            rj["operating_threshold"] = r->operating_threshold;
            rj["operating"] = report_json(r->operating);
            if (r->plan) rj["plan"] = r->plan->to_json();
            if (r->reject_margin) rj["reject_margin"] = *r->reject_margin;
            if (r->divergence) rj["divergence"] = r->divergence->to_json();
            runs_json.push_back(std::move(rj));
        }
        arm["runs"] = std::move(runs_json);

        ordered_json stats;
        for (const MetricAccess& metric : kMetrics) {
            ordered_json values = ordered_json::array();
            std::vector<double> defined;
            for (const RunResult* r : by_arm[a]) {
                const auto v = metric.get(*r);
                values.push_back(opt_json(v));
                if (v) defined.push_back(*v);
            }
            ordered_json m;
            m["values"] = std::move(values);
            m["mean"] = defined.empty() ? ordered_json(nullptr)
                                        : ordered_json(mean(defined));
            m["stderr"] = defined.empty()
                              ? ordered_json(nullptr)
                              : ordered_json(standard_error(defined));
            stats[metric.name] = std::move(m);
        }
        arm["summary"] = std::move(stats);
        arms_json.push_back(std::move(arm));
    }
    root["arms"] = std::move(arms_json);

    // Pairwise paired t-tests on shared seeds; only meaningful with >= 2 runs.
    ordered_json tests = ordered_json::array();
    if (n_runs >= 2) {
        for (std::size_t a = 0; a < by_arm.size(); ++a) {
            for (std::size_t b = a + 1; b < by_arm.size(); ++b) {
                for (const MetricAccess& metric : kMetrics) {
                    std::vector<double> va, vb;
                    for (std::size_t i = 0; i < n_runs; ++i) {
                        const auto x = metric.get(*by_arm[a][i]);
                        const auto y = metric.get(*by_arm[b][i]);
                        if (x && y) {
                            va.push_back(*x);
                            vb.push_back(*y);
                        }
                    }
                    ordered_json tj;
                    tj["metric"] = metric.name;
                    tj["a"] = config.arms[a].name;
                    tj["b"] = config.arms[b].name;
                    tj["pairs"] = va.size();
                    if (va.size() < 2) {
                        tj["note"] = "fewer than 2 complete pairs";
                    } else {
                        try {
                            const TTestResult r = paired_t_test(va, vb);
                            tj["t"] = r.t;
                            tj["p"] = r.p;
                            tj["df"] = r.df;
                        } catch (const DegenerateVarianceError&) {
                            tj["note"] = "zero variance of differences";
                        }
                    }
                    tests.push_back(std::move(tj));
                }
            }
        }
    }
    root["t_tests"] = std::move(tests);

    ExperimentSummary summary;
    summary.json = std::move(root);
    for (std::size_t a = 0; a < by_arm.size(); ++a) {
        summary.sweep_csv.emplace_back(config.arms[a].name,
                                       sweep_csv_text(by_arm[a]));
    }
    return summary;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    const Schema schema = Schema::parse_file(config.schema_path);
    const Dataset ds = load_csv(config.data_path, schema);
    return summarize(config, run_all(config, ds));
}

}  // namespace fairsample
