#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "femrisk/membership.hpp"

namespace femrisk {

enum class RiskCategory { Medium, MediumHigh, High };
enum class Impact { Moderate, Significant };

// Wire names: "Medium", "Medium-High", "High" / "Moderate", "Significant".
std::string_view to_string(RiskCategory category);
std::string_view to_string(Impact impact);
RiskCategory risk_category_from_string(std::string_view text); // throws SchemaError
Impact impact_from_string(std::string_view text);              // throws SchemaError

// One antecedent of a rule. Negated terms contribute 1 - degree.
struct RuleTerm {
    FactorId factor;
    bool negated = false;

    bool operator==(const RuleTerm&) const = default;
};

// A scoring rule. `terms` may be empty: such rules exist only as surfaces and
// never fire on symbolic (label-based) cases. `cluster` is absent for those
// same rules. `aux_clusters` records additional cluster listings for rules
// that the source taxonomy files under two clusters at once.
struct Rule {
    int id = 0;
    std::string title;
    std::optional<int> cluster;
    std::string subcluster; // dotted tag like "1.2"; empty when untagged
    std::vector<RuleTerm> terms;
    GaussianParams gaussian;
    RiskCategory degree_label = RiskCategory::Medium;
    Impact impact_label = Impact::Moderate;
    std::vector<int> aux_clusters;

    bool operator==(const Rule&) const = default;
};

// Score cut points. High iff score >= high; Medium-High iff medium_high <=
// score < high; Medium below. Stored in the rulebase document; these are the
// defaults applied when the document omits them.
struct ClassificationThresholds {
    double medium_high = 0.85;
    double high = 0.90;

    bool operator==(const ClassificationThresholds&) const = default;
};

// One semantic defect found by validate_rulebase or check_axioms. Violations
// are data for reporting, never exceptions.
struct Violation {
    std::string code;    // machine tag, e.g. "catalog.monotonicity"
    std::string subject; // factor id, rule id, or other locus
    std::string detail;  // human sentence
};

std::string to_string(const Violation& violation);

class RuleBase {
public:
    RuleBase() = default;
    RuleBase(std::vector<Rule> rules,
             std::vector<LevelCatalog> catalogs,
             ClassificationThresholds thresholds = {});

    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<LevelCatalog>& catalogs() const { return catalogs_; }
    const ClassificationThresholds& thresholds() const { return thresholds_; }

    // Sum of rule weights in ascending rule-id order, fixed at construction.
    double weight_sum() const { return weight_sum_; }

    // First rule with the given id, or null.
    const Rule* find_rule(int id) const;
    // Catalog for the factor, or null.
    const LevelCatalog* find_catalog(const FactorId& factor) const;

    // Rule ids grouped by (cluster, subcluster), ids ascending within each
    // group. Covers primary cluster tags only, so the groups partition the
    // set of cluster-tagged rules.
    const std::map<std::pair<int, std::string>, std::vector<int>>& cluster_index() const {
        return cluster_index_;
    }

    // Structural equality over rules, catalogs and thresholds.
    bool operator==(const RuleBase& other) const;

private:
    std::vector<Rule> rules_;
    std::vector<LevelCatalog> catalogs_;
    ClassificationThresholds thresholds_;
    double weight_sum_ = 0.0;
    std::map<std::pair<int, std::string>, std::vector<int>> cluster_index_;
    std::map<int, std::size_t> rule_pos_;
    std::map<FactorId, std::size_t> catalog_pos_;
};

struct ValidationOptions {
    // Enforce the canonical weight band [0.01, 0.10] on every rule.
    bool canonical_weight_band = false;
};

// Semantic validation: duplicate ids, unknown factors in terms, catalog
// monotonicity and bounds, catalog floors (relationship catalogs start above
// zero, condition catalogs start at zero), duplicate labels, parameter
// ranges, threshold ordering. Returns all findings; empty means valid.
std::vector<Violation> validate_rulebase(const RuleBase& rulebase,
                                         const ValidationOptions& options = {});

// Parses a rulebase document. Rejects malformed JSON (SyntaxError), any
// unknown key or type/range defect (SchemaError), and any document whose
// content fails validate_rulebase with default options (ValidationError).
RuleBase parse_rulebase(std::string_view text);

// parse_rulebase over a file's bytes. Throws IoError when unreadable.
RuleBase load_rulebase(const std::filesystem::path& path);

// Deterministic document form: same rulebase, same bytes, keys in fixed
// order, arrays in stored order, numbers in shortest round-trip form.
// parse_rulebase(serialize_rulebase(rb)) reproduces rb exactly.
std::string serialize_rulebase(const RuleBase& rulebase);

// The built-in model: 50 rules, 21 factor catalogs, default thresholds.
const RuleBase& canonical_rulebase();

// 64-bit FNV-1a over serialize_rulebase(rb), rendered "fnv1a64:<16 hex>".
std::string rulebase_fingerprint(const RuleBase& rulebase);
std::uint64_t fnv1a64(std::string_view bytes);

// A case assigns factors either a catalog label or a direct degree in [0, 1].
using CaseValue = std::variant<std::string, double>;

struct CaseRecord {
    std::string case_id;
    std::map<FactorId, CaseValue> assignments;
    // Present for coordinate-pair cases evaluated directly on rule surfaces.
    // A record carrying both xy and assignments is rejected at evaluation.
    std::optional<std::pair<double, double>> xy;

    bool operator==(const CaseRecord&) const = default;
};

// Resolves a symbolic case to one degree per catalog factor. Unassigned
// factors resolve to 0. Labels go through normalize_label; direct degrees
// must already lie in [0, 1]. Throws UnknownFactorError for assignments to
// factors without a catalog and UnknownLevelError for labels not in their
// catalog.
std::map<FactorId, double> resolve_case(const RuleBase& rulebase, const CaseRecord& record);

} // namespace femrisk
