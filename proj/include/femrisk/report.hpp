#pragma once

#include <map>
#include <string>
#include <vector>

#include "femrisk/inference.hpp"

namespace femrisk {

// Which figure a report headlines as "the" score per case. Weighted uses
// mu_total_normalized; Min uses mu_f. Classification follows the headline.
enum class Aggregator { Weighted, Min };

std::string_view to_string(Aggregator aggregator);

struct ScoreRow {
    Assessment assessment;
    double score = 0.0;
    RiskCategory category = RiskCategory::Medium;
    Impact impact = Impact::Moderate;
};

struct ScoreReport {
    std::string fingerprint; // of the rulebase the scores came from
    Aggregator aggregator = Aggregator::Weighted;
    std::vector<ScoreRow> rows;                 // input order
    std::map<RiskCategory, int> summary;        // all three categories present
};

// Evaluates every case and classifies by the chosen aggregator.
ScoreReport score_cases(const RuleBase& rulebase,
                        const std::vector<CaseRecord>& cases,
                        Aggregator aggregator);

// JSON rendering: fingerprint, aggregator, summary, then one object per case
// with score, category, impact, both aggregates, and the full activation map
// keyed by rule id in ascending order. Deterministic byte-for-byte.
std::string render_report_json(const ScoreReport& report);

// CSV rendering: one row per case, headline figures plus both aggregates,
// numbers with 17 significant digits.
std::string render_report_csv(const ScoreReport& report);

} // namespace femrisk
