#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "femrisk/rulebase.hpp"
#include "femrisk/surface.hpp"

namespace femrisk {

enum class EvaluationMode { Symbolic, Gaussian };

std::string_view to_string(EvaluationMode mode);

// Full result of evaluating one case against a rulebase.
struct Assessment {
    std::string case_id;
    EvaluationMode mode = EvaluationMode::Symbolic;
    std::map<int, double> activations; // rule id -> degree, every rule present
    double mu_f = 0.0;                 // min-composite degree
    bool mu_f_defaulted = false;       // true when no rule could enter the min
    double mu_total_raw = 0.0;         // sum of weight * activation
    double mu_total_normalized = 0.0;  // raw / weight_sum
    RiskCategory category = RiskCategory::Medium;
    Impact impact = Impact::Moderate;
};

// Activation degree of one rule against resolved factor degrees: the minimum
// over its terms, negated terms contributing 1 - degree. Term-free rules
// yield 0. Throws UnknownFactorError if a term's factor is not resolved.
double activation(const Rule& rule, const std::map<FactorId, double>& resolved);

// Minimum of the degrees. Throws EmptyInputError on zero operands and
// NonFiniteError / OutOfRangeError on degrees outside [0, 1].
double min_composite(std::span<const double> degrees);

// Weighted sum of activations over all rules, ascending rule-id order.
// normalized divides by weight_sum. Throws MissingActivationError when a
// rule id has no entry, EmptyInputError when normalizing with weight_sum 0.
double aggregate_weighted(const RuleBase& rulebase,
                          const std::map<int, double>& activations,
                          bool normalized);

// Category and impact for a score in [0, 1]: High iff score >= high
// threshold (impact Significant), Medium-High iff >= medium_high, else
// Medium. Throws on non-finite or out-of-range scores.
std::pair<RiskCategory, Impact> classify(double score,
                                         const ClassificationThresholds& thresholds = {});

// Evaluates one case. Coordinate (xy) cases run every rule surface at the
// point; symbolic cases resolve labels and run rule terms, with term-free
// rules held at activation 0 and excluded from mu_f. Mixing xy with
// assignments throws CaseModeError.
Assessment evaluate_case(const RuleBase& rulebase, const CaseRecord& record);

// Evidence set for check_axioms: a grid of coordinate points and/or a batch
// of symbolic cases.
struct AxiomSample {
    std::optional<GridSpec> grid;
    std::vector<CaseRecord> cases;
};

inline constexpr std::uint64_t kAxiomSampleSeed = 20240615;

// Deterministic random symbolic cases: each factor independently left
// unassigned, given a random catalog label, or given a uniform degree.
std::vector<CaseRecord> sample_cases(const RuleBase& rulebase, int count, std::uint64_t seed);

// Grid 101x101 over [0,6]^2 plus `case_count` seeded random cases.
AxiomSample default_axiom_sample(const RuleBase& rulebase, int case_count = 1000,
                                 std::uint64_t seed = kAxiomSampleSeed);

// Checks the model's internal-consistency axioms over the sample:
// every activation and aggregate finite and inside [0, 1]; catalog degrees
// within bounds and monotone; min-composite dominated by every operand.
// Findings come back as data; an empty vector means all axioms held.
std::vector<Violation> check_axioms(const RuleBase& rulebase, const AxiomSample& sample);

} // namespace femrisk
