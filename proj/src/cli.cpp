#include "fairsample/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairsample/csv.hpp"
#include "fairsample/dataset.hpp"
#include "fairsample/divergence.hpp"
#include "fairsample/errors.hpp"
#include "fairsample/harness.hpp"
#include "fairsample/metrics.hpp"
#include "fairsample/mitigators.hpp"
#include "fairsample/model.hpp"
#include "fairsample/oversample.hpp"
#include "fairsample/schema.hpp"

namespace fairsample {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string opt_str(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string("undefined");
}

ordered_json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << text;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

ordered_json cells_json(const CellCounts& c) {
    ordered_json j;
    j["rows"] = c.n();
    j["cells"] = {{"privileged_favored", c.pf},
                  {"privileged_unfavored", c.pu},
                  {"unprivileged_favored", c.uf},
                  {"unprivileged_unfavored", c.uu}};
    j["base_rate_privileged"] = opt_json(c.base_rate_privileged());
    j["base_rate_unprivileged"] = opt_json(c.base_rate_unprivileged());
    j["base_rate_gap"] = opt_json(c.base_rate_gap());
    return j;
}

void print_cells(std::ostream& out, const CellCounts& c) {
    out << "rows:                     " << c.n() << "\n"
        << "privileged favorable:     " << c.pf << "\n"
        << "privileged unfavorable:   " << c.pu << "\n"
        << "unprivileged favorable:   " << c.uf << "\n"
        << "unprivileged unfavorable: " << c.uu << "\n"
        << "base rate (privileged):   " << opt_str(c.base_rate_privileged())
        << "\n"
        << "base rate (unprivileged): " << opt_str(c.base_rate_unprivileged())
        << "\n"
        << "base rate gap:            " << opt_str(c.base_rate_gap()) << "\n";
}

ordered_json report_json(const FairnessReport& r) {
    ordered_json j;
    j["statistical_parity_difference"] =
        opt_json(r.statistical_parity_difference);
    j["disparate_impact"] = opt_json(r.disparate_impact);
    j["di_measure"] = opt_json(r.di_measure);
    j["average_odds_difference"] = opt_json(r.average_odds_difference);
    j["equal_opportunity_difference"] =
        opt_json(r.equal_opportunity_difference);
    j["theil_index"] = opt_json(r.theil_index);
    j["accuracy"] = opt_json(r.accuracy);
    j["balanced_accuracy"] = opt_json(r.balanced_accuracy);
    return j;
}

std::string sanitize_filename(const std::string& name) {
    std::string s = name;
    for (char& c : s) {
        if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '-';
    }
    return s;
}

// ---- subcommand payloads -------------------------------------------------

struct DescribeArgs {
    std::string data, schema, out;
};

int cmd_describe(const DescribeArgs& a, std::ostream& out) {
    const Schema schema = Schema::parse_file(a.schema);
    const Dataset ds = load_csv(a.data, schema);
    const CellCounts c = cell_counts(ds);
    print_cells(out, c);
    if (!a.out.empty()) write_json_file(a.out, cells_json(c));
    return 0;
}

struct DebiasArgs {
    std::string data, schema, strategy = "expand-unprivileged-favored";
    int k = 5;
    std::uint64_t seed = 0;
    std::string out, plan_out;
    bool mark_synthetic = false;
};

int cmd_debias(const DebiasArgs& a, std::ostream& out) {
    const Schema schema = Schema::parse_file(a.schema);
    const csv::Table table = csv::read_file(a.data);
    const Dataset ds = encode_table(table, schema, a.data);
    const Strategy strategy = strategy_from_string(a.strategy);
    const OversamplePlan plan =
        make_plan(cell_counts(ds), strategy, a.k, a.seed);
    const Dataset augmented = apply_plan(ds, plan);

    // Original rows are echoed verbatim; synthetic rows are de-encoded back
    // to the original column vocabulary so the file is a drop-in input.
    std::vector<std::string> header = table.header;
    if (a.mark_synthetic) header.push_back("synthetic");
    std::vector<std::vector<std::string>> rows;
    rows.reserve(augmented.size());
    for (auto row : table.rows) {
        if (a.mark_synthetic) row.push_back("0");
        rows.push_back(std::move(row));
    }
    for (std::size_t i = ds.size(); i < augmented.size(); ++i) {
        const auto decoded = ds.enc.decode_features(augmented.X.row_span(i));
        std::vector<std::string> row(table.header.size());
        for (std::size_t c = 0; c < ds.enc.features.size(); ++c) {
            row[table.column_index(ds.enc.features[c].name)] = decoded[c];
        }
        row[table.column_index(ds.enc.label_column)] =
            augmented.y[i] ? ds.enc.favorable_value : ds.enc.unfavorable_value;
        row[table.column_index(ds.enc.protected_column)] =
            augmented.g[i] ? ds.enc.privileged_value
                           : ds.enc.unprivileged_value;
        if (a.mark_synthetic) row.push_back("1");
        rows.push_back(std::move(row));
    }
    csv::write_file(a.out, header, rows);
    if (!a.plan_out.empty()) write_json_file(a.plan_out, plan.to_json());

    const CellCounts after = cell_counts(augmented);
    out << "wrote " << rows.size() << " rows (" << plan.targets.total()
        << " synthetic) to " << a.out << "\n"
        << "base rate gap: " << opt_str(cell_counts(ds).base_rate_gap())
        << " -> " << opt_str(after.base_rate_gap()) << "\n";
    return 0;
}

struct TrainArgs {
    std::string data, schema, out;
    std::string classifier = "logreg";
    std::uint64_t seed = 0;
    LogRegParams logreg;
    ForestParams forest;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
    const Schema schema = Schema::parse_file(a.schema);
    const Dataset ds = load_csv(a.data, schema);
    Model model;
    model.seed = a.seed;
    if (a.classifier == "logreg") {
        model.impl = train_logreg(ds, a.logreg);
    } else if (a.classifier == "forest") {
        ForestParams p = a.forest;
        p.seed = a.seed;
        model.impl = train_forest(ds, p);
    } else {
        throw ArgumentError("unknown classifier '" + a.classifier +
                            "' (use logreg or forest)");
    }
    save_model_file(a.out, model, ds.enc);
    out << "trained " << a.classifier << " on " << ds.size() << " rows, "
        << ds.dim() << " features; model written to " << a.out << "\n";
    return 0;
}

struct EvalArgs {
    std::string model, data, out;
    double threshold = 0.5;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto [model, enc] = load_model_file(a.model);
    const csv::Table table = csv::read_file(a.data);
    const Dataset ds = encode_with(table, enc, a.data);
    const auto scores = model.score_all(ds.X);
    const auto y_pred = predict(scores, a.threshold);
    const GroupConfusion gc = confusion_by_group(ds.y, y_pred, ds.g);
    const FairnessReport report = fairness_report(gc, ds.y, y_pred);

    out << "threshold:                     " << csv::format_double(a.threshold)
        << "\n"
        << "accuracy:                      " << opt_str(report.accuracy) << "\n"
        << "balanced accuracy:             "
        << opt_str(report.balanced_accuracy) << "\n"
        << "statistical parity difference: "
        << opt_str(report.statistical_parity_difference) << "\n"
        << "disparate impact:              "
        << opt_str(report.disparate_impact) << "\n"
        << "di measure:                    " << opt_str(report.di_measure)
        << "\n"
        << "average odds difference:       "
        << opt_str(report.average_odds_difference) << "\n"
        << "equal opportunity difference:  "
        << opt_str(report.equal_opportunity_difference) << "\n"
        << "theil index:                   " << opt_str(report.theil_index)
        << "\n";
    if (!a.out.empty()) {
        ordered_json j;
        j["threshold"] = a.threshold;
        j["report"] = report_json(report);
        j["confusion"] = {
            {"privileged",
             {{"tp", gc.privileged.tp},
              {"fp", gc.privileged.fp},
              {"tn", gc.privileged.tn},
              {"fn", gc.privileged.fn}}},
            {"unprivileged",
             {{"tp", gc.unprivileged.tp},
              {"fp", gc.unprivileged.fp},
              {"tn", gc.unprivileged.tn},
              {"fn", gc.unprivileged.fn}}}};
        write_json_file(a.out, j);
    }
    return 0;
}

struct SweepArgs {
    std::string model, data, out;
    double start = 0.0, stop = 0.5, step = 0.01;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (!(a.step > 0.0) || a.start > a.stop || a.start < 0.0 || a.stop > 1.0) {
        throw ArgumentError("sweep grid must satisfy 0 <= start <= stop <= 1 "
                            "with positive step");
    }
    const auto [model, enc] = load_model_file(a.model);
    const csv::Table table = csv::read_file(a.data);
    const Dataset ds = encode_with(table, enc, a.data);
    const auto scores = model.score_all(ds.X);

    std::ostringstream csv_text;
    csv_text << "threshold,accuracy,balanced_accuracy,di,AOD,SPD,EOD,Theil\n";
    const int count =
        static_cast<int>(std::floor((a.stop - a.start) / a.step + 0.5));
    auto cell = [](const std::optional<double>& v) {
        return v ? csv::format_double(*v) : std::string();
    };
    for (int i = 0; i <= count; ++i) {
        const double t = a.start + static_cast<double>(i) * a.step;
        const auto y_pred = predict(scores, t);
        const FairnessReport r = fairness_report(ds.y, y_pred, ds.g);
        csv_text << csv::format_double(t) << ',' << cell(r.accuracy) << ','
                 << cell(r.balanced_accuracy) << ',' << cell(r.di_measure)
                 << ',' << cell(r.average_odds_difference) << ','
                 << cell(r.statistical_parity_difference) << ','
                 << cell(r.equal_opportunity_difference) << ','
                 << cell(r.theil_index) << '\n';
    }
    if (a.out.empty()) {
        out << csv_text.str();
    } else {
        write_text_file(a.out, csv_text.str());
        out << "wrote " << (count + 1) << " thresholds to " << a.out << "\n";
    }
    return 0;
}

struct ExperimentArgs {
    std::string config, out_dir;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
    const ExperimentConfig config = ExperimentConfig::parse_file(a.config);
    const ExperimentSummary summary = run_experiment(config);

    std::filesystem::create_directories(a.out_dir);
    const auto dir = std::filesystem::path(a.out_dir);
    write_json_file((dir / "summary.json").string(), summary.json);
    for (const auto& [arm, text] : summary.sweep_csv) {
        write_text_file((dir / (sanitize_filename(arm) + ".csv")).string(),
                        text);
    }

    for (const auto& arm : summary.json.at("arms")) {
        const auto& s = arm.at("summary");
        auto fmt = [&](const char* metric) -> std::string {
            const auto& m = s.at(metric);
            if (m.at("mean").is_null()) return "undefined";
            return csv::format_double(m.at("mean").get<double>()) + " +/- " +
                   csv::format_double(m.at("stderr").get<double>());
        };
        out << arm.at("name").get<std::string>()
            << ": di=" << fmt("di_measure")
            << " |AOD|=" << fmt("abs_average_odds_difference")
            << " balanced_accuracy=" << fmt("balanced_accuracy") << "\n";
    }
    out << "summary written to " << (dir / "summary.json").string() << "\n";
    return 0;
}

struct DivergenceArgs {
    std::string data, schema, data_b, out;
    double delta = 0.05;
    std::uint64_t seed = 0;
};

int cmd_divergence(const DivergenceArgs& a, std::ostream& out) {
    const Schema schema = Schema::parse_file(a.schema);
    Matrix side_p, side_u;
    if (a.data_b.empty()) {
        // One dataset: compare the privileged rows against the unprivileged.
        const Dataset ds = load_csv(a.data, schema);
        std::vector<std::size_t> priv, unpriv;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            (ds.g[i] ? priv : unpriv).push_back(i);
        }
        side_p = ds.X.take(priv);
        side_u = ds.X.take(unpriv);
    } else {
        // Two datasets: encode the second in the first one's feature space.
        const Dataset first = load_csv(a.data, schema);
        const csv::Table table_b = csv::read_file(a.data_b);
        const Dataset second = encode_with(table_b, first.enc, a.data_b);
        side_p = first.X;
        side_u = second.X;
    }
    const int vc_dim = static_cast<int>(side_p.cols) + 1;
    const DivergenceReport report =
        bounds_report(side_p, side_u, vc_dim, a.delta, a.seed);
    out << "empirical H-divergence:    "
        << csv::format_double(report.empirical_h_divergence) << "\n"
        << "complexity term:           "
        << csv::format_double(report.complexity_term) << "\n"
        << "samples per side (m):      " << report.m << "\n"
        << "VC dimension:              " << report.vc_dim << "\n"
        << "delta:                     " << csv::format_double(report.delta)
        << "\n"
        << "favorable-gap bound:       "
        << csv::format_double(report.favorable_gap_bound) << "\n"
        << "error-gap bound (- lambda): "
        << csv::format_double(report.error_gap_bound_ex_lambda) << "\n"
        << "lambda:                    unobservable\n";
    if (!a.out.empty()) write_json_file(a.out, report.to_json());
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Group-targeted synthetic oversampling for fairer tabular "
                 "classification"};
    app.name("fairsample");
    app.require_subcommand(1);

    DescribeArgs describe_args;
    auto* describe =
        app.add_subcommand("describe", "Cell counts and base rates of a dataset");
    describe->add_option("--data", describe_args.data, "input CSV")->required();
    describe->add_option("--schema", describe_args.schema, "schema file")
        ->required();
    describe->add_option("--out", describe_args.out, "write JSON report here");

    DebiasArgs debias_args;
    auto* debias = app.add_subcommand(
        "debias", "Write an augmented CSV with synthetic rows that equalize "
                  "group base rates");
    debias->add_option("--data", debias_args.data, "input CSV")->required();
    debias->add_option("--schema", debias_args.schema, "schema file")
        ->required();
    debias->add_option("--strategy", debias_args.strategy,
                       "expand-unprivileged-favored | "
                       "expand-privileged-unfavored | combined");
    debias->add_option("--k", debias_args.k, "SMOTE neighborhood size");
    debias->add_option("--seed", debias_args.seed, "random seed (default 0)");
    debias->add_option("--out", debias_args.out, "augmented CSV path")
        ->required();
    debias->add_option("--plan-out", debias_args.plan_out,
                       "write the oversample plan JSON here");
    debias->add_flag("--mark-synthetic", debias_args.mark_synthetic,
                     "append a provenance column (0=original, 1=synthetic)");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train a classifier");
    train->add_option("--data", train_args.data, "training CSV")->required();
    train->add_option("--schema", train_args.schema, "schema file")->required();
    train->add_option("--classifier", train_args.classifier,
                      "logreg | forest");
    train->add_option("--seed", train_args.seed, "random seed (default 0)");
    train->add_option("--learning-rate", train_args.logreg.learning_rate,
                      "logreg step size");
    train->add_option("--l2", train_args.logreg.l2, "logreg L2 strength");
    train->add_option("--max-iters", train_args.logreg.max_iters,
                      "logreg iteration cap");
    train->add_option("--tol", train_args.logreg.tol,
                      "logreg gradient-norm stop");
    train->add_option("--n-trees", train_args.forest.n_trees, "forest size");
    train->add_option("--max-depth", train_args.forest.max_depth,
                      "tree depth cap");
    train->add_option("--min-leaf", train_args.forest.min_leaf,
                      "minimum rows per leaf");
    train->add_option("--features-per-split",
                      train_args.forest.features_per_split,
                      "features tried per split (0 = ceil(sqrt(d)))");
    train->add_option("--out", train_args.out, "model JSON path")->required();

    EvalArgs eval_args;
    auto* eval =
        app.add_subcommand("eval", "Fairness and accuracy report at a threshold");
    eval->add_option("--model", eval_args.model, "model JSON")->required();
    eval->add_option("--data", eval_args.data, "evaluation CSV")->required();
    eval->add_option("--threshold", eval_args.threshold,
                     "decision threshold in [0,1]");
    eval->add_option("--out", eval_args.out, "write JSON report here");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand(
        "sweep", "Per-threshold metric CSV for plotting");
    sweep->add_option("--model", sweep_args.model, "model JSON")->required();
    sweep->add_option("--data", sweep_args.data, "evaluation CSV")->required();
    sweep->add_option("--start", sweep_args.start, "first threshold");
    sweep->add_option("--stop", sweep_args.stop, "last threshold");
    sweep->add_option("--step", sweep_args.step, "grid step");
    sweep->add_option("--out", sweep_args.out,
                      "CSV path (stdout when omitted)");

    ExperimentArgs experiment_args;
    auto* experiment = app.add_subcommand(
        "experiment",
        "Run the full repeated-seed protocol described by a config file");
    experiment->add_option("--config", experiment_args.config, "config file")
        ->required();
    experiment
        ->add_option("--out-dir", experiment_args.out_dir,
                     "directory for summary.json and per-arm CSVs")
        ->required();

    DivergenceArgs divergence_args;
    auto* divergence = app.add_subcommand(
        "divergence",
        "Group-divergence report for one dataset (split by group) or two");
    divergence->add_option("--data", divergence_args.data, "input CSV")
        ->required();
    divergence->add_option("--schema", divergence_args.schema, "schema file")
        ->required();
    divergence->add_option("--data-b", divergence_args.data_b,
                           "optional second CSV to compare against");
    divergence->add_option("--delta", divergence_args.delta,
                           "bound confidence parameter");
    divergence->add_option("--seed", divergence_args.seed,
                           "random seed (default 0)");
    divergence->add_option("--out", divergence_args.out,
                           "write JSON report here");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (describe->parsed()) return cmd_describe(describe_args, out);
        if (debias->parsed()) return cmd_debias(debias_args, out);
        if (train->parsed()) return cmd_train(train_args, out);
        if (eval->parsed()) return cmd_eval(eval_args, out);
        if (sweep->parsed()) return cmd_sweep(sweep_args, out);
        if (experiment->parsed()) return cmd_experiment(experiment_args, out);
        if (divergence->parsed()) return cmd_divergence(divergence_args, out);
        err << "usage error: no subcommand\n";
        return 1;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return 1;
    } catch (const ArgumentError& e) {
        err << "argument error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        err << "io error: " << e.what() << "\n";
        return 1;
    } catch (const ComputeError& e) {
        err << "runtime error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace fairsample
