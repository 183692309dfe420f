#include <doctest.h>

#include <sstream>

#include "fairsample/errors.hpp"
#include "fairsample/harness.hpp"
#include "fairsample/model.hpp"
#include "helpers.hpp"

using namespace fairsample;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.data_path = testutil::write_biased_csv("harness.csv");
    c.schema_path = testutil::write_biased_schema("harness.schema");
    c.arms = {arm_from_string("baseline"),
              arm_from_string("oversample:expand-unprivileged-favored")};
    c.n_runs = 3;
    c.test_fraction = 0.3;
    return c;
}

}  // namespace

TEST_CASE("arm parsing") {
    CHECK(arm_from_string("baseline").kind == ArmKind::Baseline);
    CHECK(arm_from_string("reweigh").kind == ArmKind::Reweigh);
    CHECK(arm_from_string("reject-option").kind == ArmKind::RejectOption);
    const ArmSpec o = arm_from_string("oversample:combined");
    CHECK(o.kind == ArmKind::Oversample);
    CHECK(o.strategy == Strategy::Combined);
    CHECK(arm_from_string("oversample").strategy ==
          Strategy::ExpandUnprivilegedFavored);
    CHECK_THROWS_AS(arm_from_string("bogus"), ConfigError);
    CHECK_THROWS_AS(arm_from_string("reweigh:what"), ConfigError);
}

TEST_CASE("config parsing and validation") {
    SUBCASE("full file") {
        std::istringstream in(
            "# experiment\n"
            "data = d.csv\n"
            "schema = d.schema\n"
            "arm = baseline\n"
            "arm = oversample:combined\n"
            "classifier = forest\n"
            "n_trees = 31\n"
            "n_runs = 4\n"
            "test_fraction = 0.25\n"
            "threshold_step = 0.05\n"
            "divergence = off\n");
        const ExperimentConfig c = ExperimentConfig::parse(in, "test");
        CHECK(c.arms.size() == 2);
        CHECK(c.classifier == ClassifierKind::Forest);
        CHECK(c.forest.n_trees == 31);
        CHECK(c.n_runs == 4);
        CHECK_FALSE(c.compute_divergence);
        CHECK(c.effective_seeds() == std::vector<std::uint64_t>{0, 1, 2, 3});
    }
    SUBCASE("explicit seeds define the run count") {
        std::istringstream in(
            "data = d\nschema = s\narm = baseline\nseeds = 5, 6, 7\n");
        const ExperimentConfig c = ExperimentConfig::parse(in, "test");
        CHECK(c.n_runs == 3);
        CHECK(c.effective_seeds() == std::vector<std::uint64_t>{5, 6, 7});
    }
    SUBCASE("default grid is 0..0.5 step 0.01 (51 thresholds)") {
        ExperimentConfig c;
        const auto grid = c.threshold_grid();
        REQUIRE(grid.size() == 51);
        CHECK(grid.front() == 0.0);
        CHECK(grid.back() == doctest::Approx(0.5));
    }
    SUBCASE("rejections") {
        auto parse = [](const std::string& text) {
            std::istringstream in(text);
            return ExperimentConfig::parse(in, "test");
        };
        CHECK_THROWS_AS(parse("data = d\n"), ConfigError);
        CHECK_THROWS_AS(parse("data = d\nschema = s\n"), ConfigError);
        CHECK_THROWS_AS(
            parse("data = d\nschema = s\narm = baseline\nn_runs = 0\n"),
            ConfigError);
        CHECK_THROWS_AS(
            parse("data = d\nschema = s\narm = baseline\ntest_fraction = 2\n"),
            ConfigError);
        CHECK_THROWS_AS(
            parse("data = d\nschema = s\narm = baseline\narm = baseline\n"),
            ConfigError);
        CHECK_THROWS_AS(parse("data = d\nschema = s\narm = baseline\n"
                              "n_runs = 2\nseeds = 1,2,3\n"),
                        ConfigError);
    }
}

TEST_CASE("run_arm composes the pipeline modules faithfully") {
    const ExperimentConfig config = small_config();
    const Schema schema = Schema::parse_file(config.schema_path);
    const Dataset ds = load_csv(config.data_path, schema);

    SUBCASE("baseline arm equals calling the modules in sequence") {
        const RunResult r = run_arm(config, config.arms[0], 1, ds);

        const auto parts = split_with_indices(ds, config.test_fraction, 1);
        Model model;
        model.impl = train_logreg(parts.train, config.logreg);
        const auto scores = model.score_all(parts.test.X);
        std::vector<std::pair<double, FairnessReport>> sweep;
        for (double t : config.threshold_grid()) {
            sweep.emplace_back(
                t, fairness_report(parts.test.y, predict(scores, t),
                                   parts.test.g));
        }
        const double op = balanced_accuracy_threshold(sweep);
        CHECK(r.operating_threshold == op);
        for (const auto& [t, rep] : sweep) {
            if (t == op) {
                CHECK(r.operating.accuracy == rep.accuracy);
                CHECK(r.operating.di_measure == rep.di_measure);
            }
        }
        CHECK(r.split_hash == split_fingerprint(parts.test_indices));
    }
    SUBCASE("oversample arm on already-equal base rates equals baseline") {
        // Equal rates: the plan is a no-op.
        const std::string path =
            testutil::write_biased_csv("equal.csv", 40, 0.5, 0.5, 3);
        const Dataset equal = load_csv(path, schema);
        const RunResult base = run_arm(config, config.arms[0], 2, equal);
        const RunResult over = run_arm(config, config.arms[1], 2, equal);
        CHECK(over.plan.has_value());
        CHECK(over.plan->targets.total() == 0);
        CHECK(base.operating_threshold == over.operating_threshold);
        CHECK(base.operating.accuracy == over.operating.accuracy);
        CHECK(base.operating.di_measure == over.operating.di_measure);
    }
    SUBCASE("arms share the split for a shared seed") {
        const RunResult a = run_arm(config, config.arms[0], 7, ds);
        const RunResult b = run_arm(config, config.arms[1], 7, ds);
        CHECK(a.split_hash == b.split_hash);
        const RunResult c = run_arm(config, config.arms[0], 8, ds);
        CHECK(a.split_hash != c.split_hash);
    }
    SUBCASE("oversample arm records its plan and reduces the training gap") {
        const RunResult r = run_arm(config, config.arms[1], 0, ds);
        REQUIRE(r.plan.has_value());
        CHECK(r.plan->targets.unprivileged_favored > 0);
        REQUIRE(r.divergence.has_value());
        CHECK(r.divergence->empirical_h_divergence >= 0.0);
        CHECK(r.divergence->empirical_h_divergence <= 2.0);
        CHECK(r.divergence->vc_dim == static_cast<int>(ds.dim()) + 1);
    }
}

TEST_CASE("summarize") {
    ExperimentConfig config;
    config.data_path = "d";
    config.schema_path = "s";
    config.arms = {arm_from_string("baseline")};
    config.n_runs = 2;

    auto run_with = [](double accuracy, std::uint64_t seed,
                       std::uint64_t hash) {
        RunResult r;
        r.arm = "baseline";
        r.seed = seed;
        r.split_hash = hash;
        r.operating_threshold = 0.5;
        r.operating.accuracy = accuracy;
        return r;
    };

    SUBCASE("worked example: runs (0.2, 0.4) give mean 0.3 and stderr 0.1") {
        const std::vector<RunResult> runs{run_with(0.2, 0, 1),
                                          run_with(0.4, 1, 2)};
        const ExperimentSummary s = summarize(config, runs);
        const auto& acc =
            s.json.at("arms").at(0).at("summary").at("accuracy");
        CHECK(acc.at("mean").get<double>() == doctest::Approx(0.3));
        CHECK(acc.at("stderr").get<double>() == doctest::Approx(0.1));
    }
    SUBCASE("single run: stderr 0 and no t-tests") {
        config.n_runs = 1;
        const std::vector<RunResult> runs{run_with(0.7, 0, 1)};
        const ExperimentSummary s = summarize(config, runs);
        const auto& acc =
            s.json.at("arms").at(0).at("summary").at("accuracy");
        CHECK(acc.at("mean").get<double>() == doctest::Approx(0.7));
        CHECK(acc.at("stderr").get<double>() == 0.0);
        CHECK(s.json.at("t_tests").empty());
    }
    SUBCASE("constant metric across runs gives stderr 0") {
        const std::vector<RunResult> runs{run_with(0.6, 0, 1),
                                          run_with(0.6, 1, 2)};
        const ExperimentSummary s = summarize(config, runs);
        CHECK(s.json.at("arms")
                  .at(0)
                  .at("summary")
                  .at("accuracy")
                  .at("stderr")
                  .get<double>() == 0.0);
    }
    SUBCASE("mismatched run counts between arms is a pairing error") {
        config.arms = {arm_from_string("baseline"),
                       arm_from_string("reweigh")};
        std::vector<RunResult> runs{run_with(0.2, 0, 1), run_with(0.4, 1, 2)};
        RunResult other = run_with(0.3, 0, 1);
        other.arm = "reweigh";
        runs.push_back(other);
        CHECK_THROWS_AS(summarize(config, runs), PairingError);
    }
    SUBCASE("arms that saw different splits cannot be paired") {
        config.arms = {arm_from_string("baseline"),
                       arm_from_string("reweigh")};
        RunResult a = run_with(0.2, 0, 1);
        RunResult b = run_with(0.4, 0, 99);  // different split hash
        b.arm = "reweigh";
        CHECK_THROWS_AS(summarize(config, {a, b}), PairingError);
    }
}

TEST_CASE("experiment end to end") {
    ExperimentConfig config = small_config();
    const Schema schema = Schema::parse_file(config.schema_path);
    const Dataset ds = load_csv(config.data_path, schema);

    const auto runs = run_all(config, ds);
    REQUIRE(runs.size() == 6);  // 3 seeds x 2 arms
    const ExperimentSummary summary = summarize(config, runs);

    SUBCASE("summary is reproducible byte for byte") {
        const auto runs2 = run_all(config, ds);
        const ExperimentSummary summary2 = summarize(config, runs2);
        CHECK(summary.json.dump(2) == summary2.json.dump(2));
        REQUIRE(summary.sweep_csv.size() == summary2.sweep_csv.size());
        for (std::size_t i = 0; i < summary.sweep_csv.size(); ++i) {
            CHECK(summary.sweep_csv[i].second == summary2.sweep_csv[i].second);
        }
    }
    SUBCASE("t-test table pairs the two arms") {
        bool found = false;
        for (const auto& t : summary.json.at("t_tests")) {
            if (t.at("metric") == "di_measure") {
                found = true;
                CHECK(t.at("a") == "baseline");
            }
        }
        CHECK(found);
    }
    SUBCASE("per-arm sweep CSV has one row per threshold plus header") {
        for (const auto& [arm, text] : summary.sweep_csv) {
            const std::size_t lines =
                static_cast<std::size_t>(
                    std::count(text.begin(), text.end(), '\n'));
            CHECK(lines == config.threshold_grid().size() + 1);
            CHECK(text.rfind("threshold,accuracy,balanced_accuracy,di,AOD,"
                             "SPD,EOD,Theil\n",
                             0) == 0);
        }
    }
}
