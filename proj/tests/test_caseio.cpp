#include <doctest.h>

#include <json.hpp>

#include "femrisk/caseio.hpp"
#include "femrisk/errors.hpp"
#include "femrisk/report.hpp"

using namespace femrisk;

TEST_CASE("case format follows the file extension") {
    CHECK(case_format_from_path("cases.csv") == CaseFormat::Csv);
    CHECK(case_format_from_path("CASES.JSON") == CaseFormat::Json);
    CHECK(case_format_from_path("dir.with.dots/batch.Csv") == CaseFormat::Csv);
    CHECK_THROWS_AS(case_format_from_path("cases.txt"), SchemaError);
    CHECK_THROWS_AS(case_format_from_path("cases"), SchemaError);
}

TEST_CASE("csv cases parse labels, degrees and blanks") {
    const RuleBase& rb = canonical_rulebase();
    const std::string text =
        "case_id,relationship-partner,sexual-violence,threats\n"
        "c-1,extremely close,high and frequent,\n"
        "c-2,\"no prior relationship\",,0.25\n"
        "c-3,,,\n";
    const std::vector<CaseRecord> cases = parse_cases(rb, text, CaseFormat::Csv, "batch.csv");
    REQUIRE(cases.size() == 3);

    CHECK(cases[0].case_id == "c-1");
    CHECK(cases[0].assignments.size() == 2);
    CHECK(std::get<std::string>(cases[0].assignments.at("sexual-violence")) ==
          "high and frequent");

    CHECK(std::get<std::string>(cases[1].assignments.at("relationship-partner")) ==
          "no prior relationship");
    CHECK(std::get<double>(cases[1].assignments.at("threats")) == 0.25);

    CHECK(cases[2].assignments.empty());
    CHECK_FALSE(cases[2].xy.has_value());
}

TEST_CASE("csv case errors carry the source location") {
    const RuleBase& rb = canonical_rulebase();

    CHECK_THROWS_WITH_AS(
        parse_cases(rb, "case_id,ghosts\nc,0.5\n", CaseFormat::Csv, "b.csv"),
        doctest::Contains("b.csv line 1"), UnknownFactorError);

    CHECK_THROWS_WITH_AS(
        parse_cases(rb, "case_id,threats,threats\nc,0.5,0.5\n", CaseFormat::Csv, "b.csv"),
        doctest::Contains("duplicate column"), SchemaError);

    CHECK_THROWS_WITH_AS(
        parse_cases(rb, "case_id,threats\nc,0.5,0.5\n", CaseFormat::Csv, "b.csv"),
        doctest::Contains("b.csv line 2"), SyntaxError);

    CHECK_THROWS_WITH_AS(
        parse_cases(rb, "case_id,threats\nc,1.5\n", CaseFormat::Csv, "b.csv"),
        doctest::Contains("b.csv line 2"), OutOfRangeError);

    CHECK_THROWS_WITH_AS(
        parse_cases(rb, "case_id,threats\nc,armageddon\n", CaseFormat::Csv, "b.csv"),
        doctest::Contains("b.csv line 2"), UnknownLevelError);

    CHECK_THROWS_AS(parse_cases(rb, "case_id,threats\nc,0.5\nc,0.5\n", CaseFormat::Csv,
                                "b.csv"),
                    DuplicateCaseError);
    CHECK_THROWS_AS(parse_cases(rb, "case_id,threats\n,0.5\n", CaseFormat::Csv, "b.csv"),
                    SchemaError);
    CHECK_THROWS_AS(parse_cases(rb, "", CaseFormat::Csv, "b.csv"), SchemaError);
    CHECK_THROWS_AS(parse_cases(rb, "id,threats\nc,0.5\n", CaseFormat::Csv, "b.csv"),
                    SchemaError);
    CHECK_THROWS_AS(parse_cases(rb, "case_id,threats\nc,\"bad\nc2,0.1\n", CaseFormat::Csv,
                                "b.csv"),
                    SyntaxError);
}

TEST_CASE("json cases parse assignments and coordinates") {
    const RuleBase& rb = canonical_rulebase();
    const std::string text = R"({
      "cases": [
        {"case_id": "j-1", "assignments": {"relationship-partner": "close", "threats": 0.5}},
        {"case_id": "j-2", "xy": [3.0, 3.2]},
        {"case_id": "j-3"}
      ]
    })";
    const std::vector<CaseRecord> cases = parse_cases(rb, text, CaseFormat::Json, "b.json");
    REQUIRE(cases.size() == 3);
    CHECK(std::get<std::string>(cases[0].assignments.at("relationship-partner")) == "close");
    CHECK(std::get<double>(cases[0].assignments.at("threats")) == 0.5);
    REQUIRE(cases[1].xy.has_value());
    CHECK(cases[1].xy->first == 3.0);
    CHECK(cases[1].xy->second == 3.2);
    CHECK(cases[2].assignments.empty());
}

TEST_CASE("json case errors") {
    const RuleBase& rb = canonical_rulebase();
    auto parse = [&](const std::string& text) {
        return parse_cases(rb, text, CaseFormat::Json, "b.json");
    };
    CHECK_THROWS_AS(parse("{"), SyntaxError);
    CHECK_THROWS_AS(parse("{}"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [], "extra": 1})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a", "note": 1}]})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": ""}]})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a", "xy": [1]}]})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a", "xy": [1, "2"]}]})"), SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a", "assignments": {"threats": true}}]})"),
                    SchemaError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a"}, {"case_id": "a"}]})"),
                    DuplicateCaseError);
    CHECK_THROWS_AS(
        parse(R"({"cases": [{"case_id": "a", "xy": [1, 2], "assignments": {"threats": 0.5}}]})"),
        CaseModeError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a", "assignments": {"ghosts": 0.5}}]})"),
                    UnknownFactorError);
    CHECK_THROWS_AS(
        parse(R"({"cases": [{"case_id": "a", "assignments": {"threats": "often"}}]})"),
        UnknownLevelError);
    CHECK_THROWS_AS(parse(R"({"cases": [{"case_id": "a", "assignments": {"threats": -0.1}}]})"),
                    OutOfRangeError);
}

TEST_CASE("scoring produces one row per case and a full summary") {
    const RuleBase& rb = canonical_rulebase();
    const std::string text = R"({
      "cases": [
        {"case_id": "s-1", "assignments": {"relationship-partner": "extremely close",
                                           "sexual-violence": "high and frequent"}},
        {"case_id": "s-2", "xy": [2.5, 3.2]},
        {"case_id": "s-3"}
      ]
    })";
    const std::vector<CaseRecord> cases = parse_cases(rb, text, CaseFormat::Json, "b.json");

    const ScoreReport weighted = score_cases(rb, cases, Aggregator::Weighted);
    CHECK(weighted.fingerprint == rulebase_fingerprint(rb));
    REQUIRE(weighted.rows.size() == 3);
    CHECK(weighted.rows[0].assessment.case_id == "s-1");
    CHECK(weighted.rows[0].score == weighted.rows[0].assessment.mu_total_normalized);
    int total = 0;
    for (const auto& [category, count] : weighted.summary) {
        total += count;
    }
    CHECK(total == 3);
    CHECK(weighted.summary.size() == 3); // all categories always present

    const ScoreReport by_min = score_cases(rb, cases, Aggregator::Min);
    CHECK(by_min.rows[1].score == by_min.rows[1].assessment.mu_f);
    CHECK(by_min.rows[1].category ==
          classify(by_min.rows[1].assessment.mu_f, rb.thresholds()).first);
}

TEST_CASE("json report is deterministic with ascending activation keys") {
    const RuleBase& rb = canonical_rulebase();
    const std::vector<CaseRecord> cases =
        parse_cases(rb, R"({"cases": [{"case_id": "d", "xy": [3.0, 4.0]}]})",
                    CaseFormat::Json, "b.json");
    const ScoreReport report = score_cases(rb, cases, Aggregator::Weighted);
    const std::string text = render_report_json(report);
    CHECK(text == render_report_json(report));

    const auto doc = nlohmann::ordered_json::parse(text);
    CHECK(doc.at("case_count") == 1);
    CHECK(doc.at("summary").size() == 3);
    const auto& activations = doc.at("cases").at(0).at("activations");
    REQUIRE(activations.size() == 50);
    int expected = 1;
    for (const auto& item : activations.items()) {
        CHECK(item.key() == std::to_string(expected));
        ++expected;
    }
}

TEST_CASE("csv report renders headline and both aggregates") {
    const RuleBase& rb = canonical_rulebase();
    const std::vector<CaseRecord> cases =
        parse_cases(rb, "case_id,threats\nt-1,frequent and severe\n", CaseFormat::Csv, "b.csv");
    const std::string text = render_report_csv(score_cases(rb, cases, Aggregator::Weighted));
    CHECK(text.rfind("case_id,mode,score,category,impact,mu_f,mu_total_raw,"
                     "mu_total_normalized\n",
                     0) == 0);
    CHECK(text.find("t-1,symbolic,") != std::string::npos);
    CHECK(text.find("Medium") != std::string::npos);
}

TEST_CASE("high scores flow through to the significant impact") {
    // one-rule base with low thresholds so the high band is reachable
    const RuleBase rb = parse_rulebase(R"({
      "version": 1,
      "classification": {"medium_high": 0.3, "high": 0.6},
      "factors": [{"id": "threats", "levels": [{"label": "none", "degree": 0.0},
                                                {"label": "severe", "degree": 1.0}]}],
      "rules": [{"id": 1, "title": "threats alone", "cluster": 1, "subcluster": "1.1",
                 "terms": [{"factor": "threats"}],
                 "gaussian": {"a": 1, "b": 1, "sigma_x": 1, "sigma_y": 1,
                              "peak": 0.9, "weight": 0.1},
                 "degree_label": "High", "impact_label": "Significant"}]
    })");
    const std::vector<CaseRecord> cases =
        parse_cases(rb, "case_id,threats\nhot,severe\n", CaseFormat::Csv, "b.csv");
    const ScoreReport report = score_cases(rb, cases, Aggregator::Weighted);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].score == 1.0);
    CHECK(report.rows[0].category == RiskCategory::High);
    CHECK(report.rows[0].impact == Impact::Significant);
    CHECK(report.summary.at(RiskCategory::High) == 1);
}
