#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fairsample/cli.hpp"
#include "fairsample/csv.hpp"
#include "helpers.hpp"

using namespace fairsample;
using testutil::temp_path;
using testutil::write_temp_file;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 8-row fixture: PF=1, PU=1, UF=2, UU=4, so expand-unprivileged-favored
// needs exactly 2 synthetic rows to close the gap.
std::string eight_row_csv() {
    return write_temp_file("cli8.csv",
                           "v,grp,label\n"
                           "0.9,A,yes\n"
                           "0.2,A,no\n"
                           "0.8,B,yes\n"
                           "0.7,B,yes\n"
                           "0.1,B,no\n"
                           "0.2,B,no\n"
                           "0.3,B,no\n"
                           "0.15,B,no\n");
}

std::string eight_row_schema() {
    return write_temp_file("cli8.schema",
                           "label_column = label\n"
                           "favorable_value = yes\n"
                           "protected_column = grp\n"
                           "privileged_value = A\n"
                           "numeric = v\n"
                           "categorical = grp, label\n");
}

}  // namespace

TEST_CASE("describe prints cell counts and the base-rate gap") {
    const auto r = cli({"describe", "--data", eight_row_csv(), "--schema",
                        eight_row_schema()});
    CHECK(r.code == 0);
    CHECK(r.out.find("privileged favorable:     1") != std::string::npos);
    CHECK(r.out.find("unprivileged unfavorable: 4") != std::string::npos);
    CHECK(r.out.find("base rate gap:") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("cli error classes map to exit codes and prefixes") {
    SUBCASE("unknown flag") {
        const auto r = cli({"describe", "--bogus"});
        CHECK(r.code == 1);
        CHECK(r.err.rfind("usage error:", 0) == 0);
    }
    SUBCASE("unknown subcommand") {
        const auto r = cli({"frobnicate"});
        CHECK(r.code == 1);
        CHECK(r.err.rfind("usage error:", 0) == 0);
    }
    SUBCASE("missing file") {
        const auto r = cli({"describe", "--data", "/nonexistent.csv",
                            "--schema", eight_row_schema()});
        CHECK(r.code == 1);
        CHECK(r.err.rfind("io error:", 0) == 0);
    }
    SUBCASE("schema mismatch") {
        const std::string bad = write_temp_file(
            "bad.schema",
            "label_column = label\nfavorable_value = yes\n"
            "protected_column = grp\nprivileged_value = A\n"
            "numeric = missing_column\ncategorical = grp, label\n");
        const auto r =
            cli({"describe", "--data", eight_row_csv(), "--schema", bad});
        CHECK(r.code == 1);
        CHECK(r.err.rfind("schema error:", 0) == 0);
    }
    SUBCASE("insufficient SMOTE support is a runtime error (exit 2)") {
        // UF cell has a single member here.
        const std::string thin = write_temp_file("thin.csv",
                                                 "v,grp,label\n"
                                                 "0.9,A,yes\n"
                                                 "0.8,A,yes\n"
                                                 "0.2,A,no\n"
                                                 "0.3,A,no\n"
                                                 "0.7,B,yes\n"
                                                 "0.1,B,no\n"
                                                 "0.2,B,no\n"
                                                 "0.15,B,no\n");
        const auto r = cli({"debias", "--data", thin, "--schema",
                            eight_row_schema(), "--strategy",
                            "expand-unprivileged-favored", "--out",
                            temp_path("thin-out.csv")});
        CHECK(r.code == 2);
        CHECK(r.err.rfind("runtime error:", 0) == 0);
    }
    SUBCASE("help exits zero") {
        const auto r = cli({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("describe") != std::string::npos);
    }
}

TEST_CASE("debias writes a drop-in augmented CSV") {
    const std::string out_path = temp_path("aug.csv");
    const std::string plan_path = temp_path("plan.json");
    const auto r = cli({"debias", "--data", eight_row_csv(), "--schema",
                        eight_row_schema(), "--strategy",
                        "expand-unprivileged-favored", "--out", out_path,
                        "--plan-out", plan_path});
    REQUIRE(r.code == 0);

    const csv::Table t = csv::read_file(out_path);
    CHECK(t.header == std::vector<std::string>{"v", "grp", "label"});
    CHECK(t.rows.size() == 10);  // 8 original + 2 synthetic
    // Original rows echoed verbatim.
    CHECK(t.rows[0] == std::vector<std::string>{"0.9", "A", "yes"});
    // Synthetic rows carry the targeted cell's labels.
    CHECK(t.rows[8][1] == "B");
    CHECK(t.rows[8][2] == "yes");
    CHECK(t.rows[9][1] == "B");
    CHECK(t.rows[9][2] == "yes");

    const std::string plan = slurp(plan_path);
    CHECK(plan.find("\"unprivileged_favored\": 2") != std::string::npos);

    SUBCASE("re-ingesting through describe shows a closed gap") {
        const auto d = cli({"describe", "--data", out_path, "--schema",
                            eight_row_schema()});
        CHECK(d.code == 0);
        CHECK(d.out.find("unprivileged favorable:   4") != std::string::npos);
        CHECK(d.out.find("base rate gap:            0\n") != std::string::npos);
    }
    SUBCASE("omitting --seed equals --seed 0") {
        const std::string with_seed = temp_path("aug-seed0.csv");
        const auto r2 = cli({"debias", "--data", eight_row_csv(), "--schema",
                             eight_row_schema(), "--strategy",
                             "expand-unprivileged-favored", "--seed", "0",
                             "--out", with_seed});
        REQUIRE(r2.code == 0);
        CHECK(slurp(out_path) == slurp(with_seed));
    }
    SUBCASE("--mark-synthetic appends a provenance column") {
        const std::string marked = temp_path("aug-marked.csv");
        const auto r2 = cli({"debias", "--data", eight_row_csv(), "--schema",
                             eight_row_schema(), "--strategy",
                             "expand-unprivileged-favored", "--out", marked,
                             "--mark-synthetic"});
        REQUIRE(r2.code == 0);
        const csv::Table m = csv::read_file(marked);
        CHECK(m.header.back() == "synthetic");
        for (std::size_t i = 0; i < 8; ++i) CHECK(m.rows[i].back() == "0");
        CHECK(m.rows[8].back() == "1");
        CHECK(m.rows[9].back() == "1");
    }
}

TEST_CASE("train, eval, and sweep round trip") {
    const std::string data = testutil::write_biased_csv("cli-train.csv");
    const std::string schema = testutil::write_biased_schema("cli.schema");
    const std::string model_path = temp_path("model.json");

    const auto t = cli({"train", "--data", data, "--schema", schema,
                        "--classifier", "logreg", "--out", model_path});
    REQUIRE(t.code == 0);
    CHECK(slurp(model_path).find("\"kind\": \"logreg\"") != std::string::npos);

    SUBCASE("eval reports metrics at a threshold") {
        const std::string report_path = temp_path("eval.json");
        const auto e = cli({"eval", "--model", model_path, "--data", data,
                            "--threshold", "0.4", "--out", report_path});
        REQUIRE(e.code == 0);
        CHECK(e.out.find("balanced accuracy:") != std::string::npos);
        CHECK(slurp(report_path).find("\"threshold\": 0.4") !=
              std::string::npos);
    }
    SUBCASE("sweep emits one CSV row per threshold") {
        const std::string sweep_path = temp_path("sweep.csv");
        const auto s = cli({"sweep", "--model", model_path, "--data", data,
                            "--out", sweep_path});
        REQUIRE(s.code == 0);
        const csv::Table sw = csv::read_file(sweep_path);
        CHECK(sw.header.front() == "threshold");
        CHECK(sw.rows.size() == 51);
    }
    SUBCASE("forest training works through the cli") {
        const std::string rf_path = temp_path("rf.json");
        const auto f = cli({"train", "--data", data, "--schema", schema,
                            "--classifier", "forest", "--n-trees", "11",
                            "--out", rf_path});
        REQUIRE(f.code == 0);
        const auto e = cli({"eval", "--model", rf_path, "--data", data});
        CHECK(e.code == 0);
    }
}

TEST_CASE("divergence subcommand") {
    const std::string data = testutil::write_biased_csv("cli-div.csv");
    const std::string schema = testutil::write_biased_schema("cli-div.schema");
    const std::string out_path = temp_path("div.json");
    const auto r = cli({"divergence", "--data", data, "--schema", schema,
                        "--out", out_path});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("empirical H-divergence:") != std::string::npos);
    CHECK(r.out.find("lambda:                    unobservable") !=
          std::string::npos);
    CHECK(slurp(out_path).find("\"lambda\": \"unobservable\"") !=
          std::string::npos);
}

TEST_CASE("experiment is byte-deterministic") {
    const std::string data = testutil::write_biased_csv("cli-exp.csv", 40);
    const std::string schema = testutil::write_biased_schema("cli-exp.schema");
    const std::string config = write_temp_file(
        "exp.config",
        "data = " + data + "\n" +
        "schema = " + schema + "\n" +
        "arm = baseline\n"
        "arm = oversample:expand-unprivileged-favored\n"
        "n_runs = 2\n"
        "threshold_step = 0.05\n");

    const std::string dir1 = temp_path("exp-out-1");
    const std::string dir2 = temp_path("exp-out-2");
    const auto r1 = cli({"experiment", "--config", config, "--out-dir", dir1});
    REQUIRE(r1.code == 0);
    const auto r2 = cli({"experiment", "--config", config, "--out-dir", dir2});
    REQUIRE(r2.code == 0);

    CHECK(slurp(dir1 + "/summary.json") == slurp(dir2 + "/summary.json"));
    CHECK(slurp(dir1 + "/baseline.csv") == slurp(dir2 + "/baseline.csv"));
    CHECK(slurp(dir1 + "/oversample-expand-unprivileged-favored.csv") ==
          slurp(dir2 + "/oversample-expand-unprivileged-favored.csv"));
    CHECK(r1.out == r2.out);
    CHECK(r1.out.find("baseline: di=") != std::string::npos);
}
