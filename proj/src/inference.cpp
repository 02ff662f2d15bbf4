#include "femrisk/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "femrisk/errors.hpp"

namespace femrisk {

std::string_view to_string(EvaluationMode mode) {
    return mode == EvaluationMode::Gaussian ? "gaussian" : "symbolic";
}

double activation(const Rule& rule, const std::map<FactorId, double>& resolved) {
    if (rule.terms.empty()) {
        return 0.0;
    }
    double result = 1.0;
    for (const RuleTerm& term : rule.terms) {
        auto it = resolved.find(term.factor);
        if (it == resolved.end()) {
            throw UnknownFactorError("rule " + std::to_string(rule.id) +
                                     ": no resolved degree for factor '" + term.factor + "'");
        }
        const double degree = term.negated ? complement(it->second) : it->second;
        result = std::min(result, degree);
    }
    return result;
}

double min_composite(std::span<const double> degrees) {
    if (degrees.empty()) {
        throw EmptyInputError("min composition needs at least one degree");
    }
    double result = 1.0;
    for (double degree : degrees) {
        if (!std::isfinite(degree)) {
            throw NonFiniteError("min composition requires finite degrees");
        }
        if (degree < 0.0 || degree > 1.0) {
            throw OutOfRangeError("min composition requires degrees in [0, 1]");
        }
        result = std::min(result, degree);
    }
    return result;
}

double aggregate_weighted(const RuleBase& rulebase,
                          const std::map<int, double>& activations,
                          bool normalized) {
    // Accumulation order is ascending rule id; rule_pos_ iteration already
    // provides it, but duplicate ids collapse there, so walk ids explicitly.
    std::vector<const Rule*> ordered;
    ordered.reserve(rulebase.rules().size());
    for (const Rule& rule : rulebase.rules()) {
        ordered.push_back(&rule);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Rule* l, const Rule* r) { return l->id < r->id; });

    double sum = 0.0;
    for (const Rule* rule : ordered) {
        auto it = activations.find(rule->id);
        if (it == activations.end()) {
            throw MissingActivationError("no activation recorded for rule " +
                                         std::to_string(rule->id));
        }
        sum += rule->gaussian.weight * it->second;
    }
    if (!normalized) {
        return sum;
    }
    if (rulebase.weight_sum() <= 0.0) {
        throw EmptyInputError("cannot normalize: rulebase weight sum is zero");
    }
    return sum / rulebase.weight_sum();
}

std::pair<RiskCategory, Impact> classify(double score,
                                         const ClassificationThresholds& thresholds) {
    if (!std::isfinite(score)) {
        throw NonFiniteError("classification requires a finite score");
    }
    if (score < 0.0 || score > 1.0) {
        throw OutOfRangeError("classification requires a score in [0, 1]");
    }
    if (score >= thresholds.high) {
        return {RiskCategory::High, Impact::Significant};
    }
    if (score >= thresholds.medium_high) {
        return {RiskCategory::MediumHigh, Impact::Moderate};
    }
    return {RiskCategory::Medium, Impact::Moderate};
}

Assessment evaluate_case(const RuleBase& rulebase, const CaseRecord& record) {
    if (record.xy && !record.assignments.empty()) {
        throw CaseModeError("case '" + record.case_id +
                            "' mixes coordinates with factor assignments");
    }

    Assessment out;
    out.case_id = record.case_id;

    std::vector<double> min_operands;
    if (record.xy) {
        out.mode = EvaluationMode::Gaussian;
        const auto [x, y] = *record.xy;
        for (const Rule& rule : rulebase.rules()) {
            const double degree = eval_gaussian(rule.gaussian, x, y);
            out.activations[rule.id] = degree;
            min_operands.push_back(degree);
        }
    } else {
        out.mode = EvaluationMode::Symbolic;
        const std::map<FactorId, double> resolved = resolve_case(rulebase, record);
        for (const Rule& rule : rulebase.rules()) {
            const double degree = activation(rule, resolved);
            out.activations[rule.id] = degree;
            if (!rule.terms.empty()) {
                min_operands.push_back(degree);
            }
        }
    }

    if (min_operands.empty()) {
        out.mu_f = 0.0;
        out.mu_f_defaulted = true;
    } else {
        out.mu_f = min_composite(min_operands);
    }
    out.mu_total_raw = aggregate_weighted(rulebase, out.activations, false);
    out.mu_total_normalized = aggregate_weighted(rulebase, out.activations, true);
    std::tie(out.category, out.impact) =
        classify(out.mu_total_normalized, rulebase.thresholds());
    return out;
}

std::vector<CaseRecord> sample_cases(const RuleBase& rulebase, int count, std::uint64_t seed) {
    if (count < 0) {
        throw OutOfRangeError("case sample count must be non-negative");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<CaseRecord> cases;
    cases.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        CaseRecord record;
        record.case_id = "sample-" + std::to_string(i + 1);
        for (const LevelCatalog& catalog : rulebase.catalogs()) {
            const double choice = uniform(rng);
            if (choice < 0.4) {
                continue; // leave unassigned
            }
            if (choice < 0.8) {
                std::uniform_int_distribution<std::size_t> pick(0, catalog.levels.size() - 1);
                record.assignments[catalog.factor] = catalog.levels[pick(rng)].label;
            } else {
                record.assignments[catalog.factor] = uniform(rng);
            }
        }
        cases.push_back(std::move(record));
    }
    return cases;
}

AxiomSample default_axiom_sample(const RuleBase& rulebase, int case_count, std::uint64_t seed) {
    AxiomSample sample;
    sample.grid = GridSpec{};
    sample.cases = sample_cases(rulebase, case_count, seed);
    return sample;
}

namespace {

void check_degree(double value, const std::string& code, const std::string& subject,
                  const std::string& what, std::vector<Violation>& out) {
    if (!std::isfinite(value)) {
        out.push_back({code, subject, what + " is not finite"});
    } else if (value < 0.0 || value > 1.0) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out.push_back({code, subject, what + " = " + buf + " outside [0, 1]"});
    }
}

} // namespace

std::vector<Violation> check_axioms(const RuleBase& rulebase, const AxiomSample& sample) {
    std::vector<Violation> out;

    // Catalog axioms: bounded degrees, monotone severity.
    for (const LevelCatalog& catalog : rulebase.catalogs()) {
        for (const Level& level : catalog.levels) {
            check_degree(level.degree, "axiom.catalog-bounds", catalog.factor,
                         "level '" + level.label + "'", out);
        }
        for (std::size_t i = 1; i < catalog.levels.size(); ++i) {
            if (catalog.levels[i].degree < catalog.levels[i - 1].degree) {
                out.push_back({"axiom.catalog-monotonicity", catalog.factor,
                               "severity order is not monotone at level '" +
                                   catalog.levels[i].label + "'"});
            }
        }
    }

    // Surface axioms over the grid: positivity, boundedness, and the
    // composite staying inside [0, 1]. One finding per rule, not per point.
    if (sample.grid) {
        const std::vector<double> xs =
            grid_axis(sample.grid->x_min, sample.grid->x_max, sample.grid->resolution);
        const std::vector<double> ys =
            grid_axis(sample.grid->y_min, sample.grid->y_max, sample.grid->resolution);
        std::set<int> flagged;
        bool composite_flagged = false;
        for (double x : xs) {
            for (double y : ys) {
                double weighted = 0.0;
                for (const Rule& rule : rulebase.rules()) {
                    const double g = eval_gaussian(rule.gaussian, x, y);
                    if ((!std::isfinite(g) || g <= 0.0 || g > rule.gaussian.peak) &&
                        flagged.insert(rule.id).second) {
                        out.push_back({"axiom.surface-range",
                                       "rule " + std::to_string(rule.id),
                                       "surface value escapes (0, peak] on the grid"});
                    }
                    weighted += rule.gaussian.weight * g;
                }
                if (rulebase.weight_sum() > 0.0 && !composite_flagged) {
                    const double normalized = weighted / rulebase.weight_sum();
                    if (!std::isfinite(normalized) || normalized < 0.0 || normalized > 1.0) {
                        composite_flagged = true;
                        check_degree(normalized, "axiom.composite-range", "composite",
                                     "normalized weighted sum", out);
                    }
                }
            }
        }
    }

    // Case axioms: every activation in [0, 1], min dominated by every
    // operand, aggregates bounded.
    for (const CaseRecord& record : sample.cases) {
        const Assessment assessment = evaluate_case(rulebase, record);
        const std::string subject = "case '" + record.case_id + "'";
        double smallest = 1.0;
        bool any_termed = false;
        for (const auto& [rule_id, degree] : assessment.activations) {
            check_degree(degree, "axiom.activation-range",
                         subject + " rule " + std::to_string(rule_id), "activation", out);
            const Rule* rule = rulebase.find_rule(rule_id);
            const bool in_min = assessment.mode == EvaluationMode::Gaussian ||
                                (rule && !rule->terms.empty());
            if (in_min) {
                any_termed = true;
                smallest = std::min(smallest, degree);
                if (assessment.mu_f > degree) {
                    out.push_back({"axiom.min-dominance", subject,
                                   "composite degree exceeds the activation of rule " +
                                       std::to_string(rule_id)});
                }
            }
        }
        if (any_termed && assessment.mu_f != smallest) {
            out.push_back({"axiom.min-dominance", subject,
                           "composite degree is not the smallest participating activation"});
        }
        check_degree(assessment.mu_f, "axiom.composite-range", subject, "min composite", out);
        check_degree(assessment.mu_total_normalized, "axiom.composite-range", subject,
                     "normalized weighted sum", out);
    }

    return out;
}

} // namespace femrisk
