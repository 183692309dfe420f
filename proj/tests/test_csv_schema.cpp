#include <doctest.h>

#include <sstream>

#include "fairsample/csv.hpp"
#include "fairsample/errors.hpp"
#include "fairsample/schema.hpp"
#include "helpers.hpp"

using namespace fairsample;

TEST_CASE("csv parses quoted fields, trimming, and CRLF") {
    std::istringstream in(
        "a, b ,c\r\n"
        "1,\"x,y\",\" keep \"\r\n"
        "2, plain , \"\"\"q\"\"\" \n");
    const csv::Table t = csv::parse(in, "test");
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "x,y", " keep "});
    CHECK(t.rows[1] == std::vector<std::string>{"2", "plain", "\"q\""});
    CHECK(t.line_numbers == std::vector<std::size_t>{2, 3});
}

TEST_CASE("csv rejects ragged rows with the line number") {
    std::istringstream in("a,b\n1,2\n1,2,3\n");
    CHECK_THROWS_WITH_AS(csv::parse(in, "f"),
                         "f:3: expected 2 fields, got 3", DataError);
}

TEST_CASE("csv rejects empty input") {
    std::istringstream in("");
    CHECK_THROWS_AS(csv::parse(in, "f"), DataError);
}

TEST_CASE("csv write/read round trip preserves awkward fields") {
    const std::vector<std::string> header{"x", "note"};
    const std::vector<std::vector<std::string>> rows{
        {"1", "with,comma"}, {"2", "with \"quotes\""}, {"3", "line\nbreak"}};
    const std::string path = testutil::temp_path("roundtrip.csv");
    csv::write_file(path, header, rows);
    const csv::Table t = csv::read_file(path);
    CHECK(t.header == header);
    CHECK(t.rows == rows);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 12345.678, 0.0}) {
        CHECK(std::stod(csv::format_double(v)) == v);
    }
}

TEST_CASE("schema parses the key/value format") {
    std::istringstream in(
        "# demo schema\n"
        "label_column = outcome\n"
        "favorable_value = yes\n"
        "protected_column = group\n"
        "privileged_value = A\n"
        "numeric = score1, aux\n"
        "categorical = dept, group, outcome\n");
    const Schema s = Schema::parse(in, "test");
    CHECK(s.columns.size() == 5);
    CHECK(s.kind_of("score1") == ColumnKind::Numeric);
    CHECK(s.kind_of("dept") == ColumnKind::Categorical);
    CHECK(s.label_column == "outcome");
    CHECK(s.privileged_value == "A");
}

TEST_CASE("schema validation errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return Schema::parse(in, "test");
    };
    CHECK_THROWS_AS(parse("numeric = a\n"), SchemaError);  // label missing
    CHECK_THROWS_AS(parse("label_column = y\nfavorable_value = 1\n"
                          "protected_column = g\nprivileged_value = 1\n"
                          "numeric = a\ncategorical = g\n"),
                    SchemaError);  // label not among columns
    CHECK_THROWS_AS(parse("label_column = y\nfavorable_value = 1\n"
                          "protected_column = g\nprivileged_value = 1\n"
                          "numeric = a, a\ncategorical = g, y\n"),
                    SchemaError);  // duplicate column
    CHECK_THROWS_AS(parse("bogus_key = 1\n"), SchemaError);
}
