#include "femrisk/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "femrisk/errors.hpp"

namespace femrisk {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Aggregator aggregator) {
    return aggregator == Aggregator::Min ? "min" : "weighted";
}

ScoreReport score_cases(const RuleBase& rulebase,
                        const std::vector<CaseRecord>& cases,
                        Aggregator aggregator) {
    ScoreReport report;
    report.fingerprint = rulebase_fingerprint(rulebase);
    report.aggregator = aggregator;
    report.summary = {{RiskCategory::Medium, 0},
                      {RiskCategory::MediumHigh, 0},
                      {RiskCategory::High, 0}};
    for (const CaseRecord& record : cases) {
        ScoreRow row;
        row.assessment = evaluate_case(rulebase, record);
        if (aggregator == Aggregator::Weighted) {
            row.score = row.assessment.mu_total_normalized;
            row.category = row.assessment.category;
            row.impact = row.assessment.impact;
        } else {
            row.score = row.assessment.mu_f;
            std::tie(row.category, row.impact) = classify(row.score, rulebase.thresholds());
        }
        ++report.summary[row.category];
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string num(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace

std::string render_report_json(const ScoreReport& report) {
    ordered_json doc;
    doc["rulebase_fingerprint"] = report.fingerprint;
    doc["aggregator"] = std::string(to_string(report.aggregator));
    doc["case_count"] = report.rows.size();
    doc["summary"] = ordered_json::object();
    for (const auto& [category, count] : report.summary) {
        doc["summary"][std::string(to_string(category))] = count;
    }
    doc["cases"] = ordered_json::array();
    for (const ScoreRow& row : report.rows) {
        const Assessment& a = row.assessment;
        ordered_json node;
        node["case_id"] = a.case_id;
        node["mode"] = std::string(to_string(a.mode));
        node["score"] = row.score;
        node["category"] = std::string(to_string(row.category));
        node["impact"] = std::string(to_string(row.impact));
        node["mu_f"] = a.mu_f;
        if (a.mu_f_defaulted) {
            node["mu_f_defaulted"] = true;
        }
        node["mu_total_raw"] = a.mu_total_raw;
        node["mu_total_normalized"] = a.mu_total_normalized;
        node["activations"] = ordered_json::object();
        for (const auto& [rule_id, degree] : a.activations) {
            node["activations"][std::to_string(rule_id)] = degree;
        }
        doc["cases"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

std::string render_report_csv(const ScoreReport& report) {
    std::string out = "case_id,mode,score,category,impact,mu_f,mu_total_raw,mu_total_normalized\n";
    for (const ScoreRow& row : report.rows) {
        const Assessment& a = row.assessment;
        out += a.case_id;
        out.push_back(',');
        out += to_string(a.mode);
        out.push_back(',');
        out += num(row.score);
        out.push_back(',');
        out += to_string(row.category);
        out.push_back(',');
        out += to_string(row.impact);
        out.push_back(',');
        out += num(a.mu_f);
        out.push_back(',');
        out += num(a.mu_total_raw);
        out.push_back(',');
        out += num(a.mu_total_normalized);
        out.push_back('\n');
    }
    return out;
}

} // namespace femrisk
