#include "femrisk/rulebase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "femrisk/errors.hpp"

namespace femrisk {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(RiskCategory category) {
    switch (category) {
    case RiskCategory::Medium: return "Medium";
    case RiskCategory::MediumHigh: return "Medium-High";
    case RiskCategory::High: return "High";
    }
    return "Medium";
}

std::string_view to_string(Impact impact) {
    return impact == Impact::Significant ? "Significant" : "Moderate";
}

RiskCategory risk_category_from_string(std::string_view text) {
    if (text == "Medium") return RiskCategory::Medium;
    if (text == "Medium-High") return RiskCategory::MediumHigh;
    if (text == "High") return RiskCategory::High;
    throw SchemaError("unknown risk category '" + std::string(text) + "'");
}

Impact impact_from_string(std::string_view text) {
    if (text == "Moderate") return Impact::Moderate;
    if (text == "Significant") return Impact::Significant;
    throw SchemaError("unknown impact '" + std::string(text) + "'");
}

std::string to_string(const Violation& violation) {
    return violation.code + " [" + violation.subject + "]: " + violation.detail;
}

RuleBase::RuleBase(std::vector<Rule> rules,
                   std::vector<LevelCatalog> catalogs,
                   ClassificationThresholds thresholds)
    : rules_(std::move(rules)), catalogs_(std::move(catalogs)), thresholds_(thresholds) {
    std::vector<std::size_t> order(rules_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return rules_[l].id < rules_[r].id; });
    weight_sum_ = 0.0;
    for (std::size_t i : order) {
        weight_sum_ += rules_[i].gaussian.weight;
    }
    for (std::size_t i : order) {
        const Rule& rule = rules_[i];
        rule_pos_.emplace(rule.id, i); // first occurrence wins
        if (rule.cluster) {
            cluster_index_[{*rule.cluster, rule.subcluster}].push_back(rule.id);
        }
    }
    for (auto& [key, ids] : cluster_index_) {
        std::sort(ids.begin(), ids.end());
    }
    for (std::size_t i = 0; i < catalogs_.size(); ++i) {
        catalog_pos_.emplace(catalogs_[i].factor, i);
    }
}

const Rule* RuleBase::find_rule(int id) const {
    auto it = rule_pos_.find(id);
    return it == rule_pos_.end() ? nullptr : &rules_[it->second];
}

const LevelCatalog* RuleBase::find_catalog(const FactorId& factor) const {
    auto it = catalog_pos_.find(factor);
    return it == catalog_pos_.end() ? nullptr : &catalogs_[it->second];
}

bool RuleBase::operator==(const RuleBase& other) const {
    return rules_ == other.rules_ && catalogs_ == other.catalogs_ &&
           thresholds_ == other.thresholds_;
}

namespace {

bool is_relationship_factor(const FactorId& factor) {
    return factor.rfind("relationship-", 0) == 0;
}

std::string num(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void check_gaussian(const Rule& rule, std::vector<Violation>& out) {
    const std::string subject = "rule " + std::to_string(rule.id);
    const GaussianParams& g = rule.gaussian;
    if (!std::isfinite(g.a) || !std::isfinite(g.b)) {
        out.push_back({"rule.center", subject, "surface center must be finite"});
    }
    if (!std::isfinite(g.sigma_x) || g.sigma_x <= 0.0 || !std::isfinite(g.sigma_y) ||
        g.sigma_y <= 0.0) {
        out.push_back({"rule.sigma", subject, "sigma_x and sigma_y must be positive"});
    }
    if (!std::isfinite(g.peak) || g.peak <= 0.0 || g.peak > 1.0) {
        out.push_back({"rule.peak", subject, "peak must lie in (0, 1], got " + num(g.peak)});
    }
    if (!std::isfinite(g.weight) || g.weight <= 0.0 || g.weight > 1.0) {
        out.push_back({"rule.weight", subject, "weight must lie in (0, 1], got " + num(g.weight)});
    }
}

} // namespace

std::vector<Violation> validate_rulebase(const RuleBase& rulebase,
                                         const ValidationOptions& options) {
    std::vector<Violation> out;

    std::map<FactorId, int> catalog_count;
    for (const LevelCatalog& catalog : rulebase.catalogs()) {
        ++catalog_count[catalog.factor];
    }
    for (const auto& [factor, count] : catalog_count) {
        if (count > 1) {
            out.push_back({"catalog.duplicate-factor", factor,
                           "factor has " + std::to_string(count) + " catalogs"});
        }
    }
    for (const LevelCatalog& catalog : rulebase.catalogs()) {
        if (catalog.levels.empty()) {
            out.push_back({"catalog.empty", catalog.factor, "catalog has no levels"});
            continue;
        }
        std::map<std::string, int> label_count;
        for (const Level& level : catalog.levels) {
            ++label_count[normalize_label(level.label)];
            if (!std::isfinite(level.degree) || level.degree < 0.0 || level.degree > 1.0) {
                out.push_back({"catalog.bounds", catalog.factor,
                               "level '" + level.label + "' degree " + num(level.degree) +
                                   " outside [0, 1]"});
            }
        }
        for (const auto& [label, count] : label_count) {
            if (count > 1) {
                out.push_back({"catalog.duplicate-label", catalog.factor,
                               "label '" + label + "' appears " + std::to_string(count) +
                                   " times"});
            }
        }
        for (std::size_t i = 1; i < catalog.levels.size(); ++i) {
            if (catalog.levels[i].degree < catalog.levels[i - 1].degree) {
                out.push_back({"catalog.monotonicity", catalog.factor,
                               "degree drops from " + num(catalog.levels[i - 1].degree) +
                                   " to " + num(catalog.levels[i].degree) + " at level '" +
                                   catalog.levels[i].label + "'"});
            }
        }
        const double floor = catalog.levels.front().degree;
        if (is_relationship_factor(catalog.factor)) {
            if (floor <= 0.0) {
                out.push_back({"catalog.floor", catalog.factor,
                               "relationship catalogs must start above 0, got " + num(floor)});
            }
        } else if (floor != 0.0) {
            out.push_back({"catalog.floor", catalog.factor,
                           "condition catalogs must start at exactly 0, got " + num(floor)});
        }
    }

    std::map<int, int> id_count;
    for (const Rule& rule : rulebase.rules()) {
        ++id_count[rule.id];
    }
    for (const auto& [id, count] : id_count) {
        if (count > 1) {
            out.push_back({"rule.duplicate-id", "rule " + std::to_string(id),
                           "id appears " + std::to_string(count) + " times"});
        }
    }
    for (const Rule& rule : rulebase.rules()) {
        const std::string subject = "rule " + std::to_string(rule.id);
        std::map<FactorId, int> term_count;
        for (const RuleTerm& term : rule.terms) {
            ++term_count[term.factor];
            if (!rulebase.find_catalog(term.factor)) {
                out.push_back({"rule.unknown-factor", subject,
                               "term references factor '" + term.factor + "' with no catalog"});
            }
        }
        for (const auto& [factor, count] : term_count) {
            if (count > 1) {
                out.push_back({"rule.duplicate-term", subject,
                               "factor '" + factor + "' appears in " + std::to_string(count) +
                                   " terms"});
            }
        }
        check_gaussian(rule, out);
        if (options.canonical_weight_band &&
            (rule.gaussian.weight < 0.01 || rule.gaussian.weight > 0.10)) {
            out.push_back({"rule.weight-band", subject,
                           "weight " + num(rule.gaussian.weight) + " outside [0.01, 0.10]"});
        }
    }

    const ClassificationThresholds& t = rulebase.thresholds();
    if (!std::isfinite(t.medium_high) || !std::isfinite(t.high) || t.medium_high < 0.0 ||
        t.high > 1.0 || t.medium_high > t.high) {
        out.push_back({"thresholds.order", "classification",
                       "need 0 <= medium_high <= high <= 1, got medium_high=" +
                           num(t.medium_high) + " high=" + num(t.high)});
    }

    return out;
}

namespace {

// Every parsed object goes through here: all keys must be declared, all
// required keys must be present.
void require_keys(const ordered_json& obj, const std::string& where,
                  std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional) {
    if (!obj.is_object()) {
        throw SchemaError(where + " must be an object");
    }
    for (const auto& item : obj.items()) {
        const std::string& key = item.key();
        const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                           std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) {
            throw SchemaError(where + " has unknown key '" + key + "'");
        }
    }
    for (std::string_view key : required) {
        if (!obj.contains(std::string(key))) {
            throw SchemaError(where + " is missing key '" + std::string(key) + "'");
        }
    }
}

double get_number(const ordered_json& obj, const std::string& where, const char* key) {
    const ordered_json& v = obj.at(key);
    if (!v.is_number()) {
        throw SchemaError(where + "." + key + " must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw SchemaError(where + "." + key + " must be finite");
    }
    return d;
}

int get_int(const ordered_json& obj, const std::string& where, const char* key) {
    const ordered_json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw SchemaError(where + "." + key + " must be an integer");
    }
    return v.get<int>();
}

std::string get_string(const ordered_json& obj, const std::string& where, const char* key) {
    const ordered_json& v = obj.at(key);
    if (!v.is_string()) {
        throw SchemaError(where + "." + key + " must be a string");
    }
    return v.get<std::string>();
}

const ordered_json& get_array(const ordered_json& obj, const std::string& where,
                              const char* key) {
    const ordered_json& v = obj.at(key);
    if (!v.is_array()) {
        throw SchemaError(where + "." + key + " must be an array");
    }
    return v;
}

LevelCatalog parse_catalog(const ordered_json& node, const std::string& where) {
    require_keys(node, where, {"id", "levels"}, {});
    LevelCatalog catalog;
    catalog.factor = get_string(node, where, "id");
    if (catalog.factor.empty()) {
        throw SchemaError(where + ".id must be non-empty");
    }
    const ordered_json& levels = get_array(node, where, "levels");
    if (levels.empty()) {
        throw SchemaError(where + ".levels must be non-empty");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string lwhere = where + ".levels[" + std::to_string(i) + "]";
        require_keys(levels[i], lwhere, {"label", "degree"}, {});
        Level level;
        level.label = get_string(levels[i], lwhere, "label");
        if (normalize_label(level.label).empty()) {
            throw SchemaError(lwhere + ".label must be non-empty");
        }
        level.degree = get_number(levels[i], lwhere, "degree");
        if (level.degree < 0.0 || level.degree > 1.0) {
            throw SchemaError(lwhere + ".degree must lie in [0, 1]");
        }
        catalog.levels.push_back(std::move(level));
    }
    return catalog;
}

Rule parse_rule(const ordered_json& node, const std::string& where) {
    require_keys(node, where,
                 {"id", "title", "gaussian", "degree_label", "impact_label"},
                 {"cluster", "subcluster", "terms", "aux_clusters"});
    Rule rule;
    rule.id = get_int(node, where, "id");
    if (rule.id < 1) {
        throw SchemaError(where + ".id must be a positive integer");
    }
    rule.title = get_string(node, where, "title");
    if (node.contains("cluster") && !node.at("cluster").is_null()) {
        const int cluster = get_int(node, where, "cluster");
        if (cluster < 1) {
            throw SchemaError(where + ".cluster must be a positive integer or null");
        }
        rule.cluster = cluster;
    }
    if (node.contains("subcluster")) {
        rule.subcluster = get_string(node, where, "subcluster");
    }
    if (node.contains("terms")) {
        const ordered_json& terms = get_array(node, where, "terms");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string twhere = where + ".terms[" + std::to_string(i) + "]";
            require_keys(terms[i], twhere, {"factor"}, {"negated"});
            RuleTerm term;
            term.factor = get_string(terms[i], twhere, "factor");
            if (term.factor.empty()) {
                throw SchemaError(twhere + ".factor must be non-empty");
            }
            if (terms[i].contains("negated")) {
                const ordered_json& neg = terms[i].at("negated");
                if (!neg.is_boolean()) {
                    throw SchemaError(twhere + ".negated must be a boolean");
                }
                term.negated = neg.get<bool>();
            }
            rule.terms.push_back(std::move(term));
        }
    }
    const std::string gwhere = where + ".gaussian";
    const ordered_json& g = node.at("gaussian");
    require_keys(g, gwhere, {"a", "b", "sigma_x", "sigma_y", "peak", "weight"}, {});
    rule.gaussian.a = get_number(g, gwhere, "a");
    rule.gaussian.b = get_number(g, gwhere, "b");
    rule.gaussian.sigma_x = get_number(g, gwhere, "sigma_x");
    rule.gaussian.sigma_y = get_number(g, gwhere, "sigma_y");
    if (rule.gaussian.sigma_x <= 0.0 || rule.gaussian.sigma_y <= 0.0) {
        throw SchemaError(gwhere + " sigma_x and sigma_y must be positive");
    }
    rule.gaussian.peak = get_number(g, gwhere, "peak");
    if (rule.gaussian.peak <= 0.0 || rule.gaussian.peak > 1.0) {
        throw SchemaError(gwhere + ".peak must lie in (0, 1]");
    }
    rule.gaussian.weight = get_number(g, gwhere, "weight");
    if (rule.gaussian.weight <= 0.0 || rule.gaussian.weight > 1.0) {
        throw SchemaError(gwhere + ".weight must lie in (0, 1]");
    }
    rule.degree_label = risk_category_from_string(get_string(node, where, "degree_label"));
    rule.impact_label = impact_from_string(get_string(node, where, "impact_label"));
    if (node.contains("aux_clusters")) {
        const ordered_json& aux = get_array(node, where, "aux_clusters");
        for (std::size_t i = 0; i < aux.size(); ++i) {
            if (!aux[i].is_number_integer() || aux[i].get<int>() < 1) {
                throw SchemaError(where + ".aux_clusters must hold positive integers");
            }
            rule.aux_clusters.push_back(aux[i].get<int>());
        }
    }
    return rule;
}

} // namespace

RuleBase parse_rulebase(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("rulebase document: ") + e.what());
    }
    require_keys(doc, "rulebase", {"version", "factors", "rules"}, {"classification"});
    const int version = get_int(doc, "rulebase", "version");
    if (version != 1) {
        throw SchemaError("rulebase.version must be 1, got " + std::to_string(version));
    }

    std::vector<LevelCatalog> catalogs;
    const ordered_json& factors = get_array(doc, "rulebase", "factors");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        catalogs.push_back(parse_catalog(factors[i], "factors[" + std::to_string(i) + "]"));
    }

    std::vector<Rule> rules;
    const ordered_json& rule_nodes = get_array(doc, "rulebase", "rules");
    for (std::size_t i = 0; i < rule_nodes.size(); ++i) {
        rules.push_back(parse_rule(rule_nodes[i], "rules[" + std::to_string(i) + "]"));
    }

    ClassificationThresholds thresholds;
    if (doc.contains("classification")) {
        const ordered_json& c = doc.at("classification");
        require_keys(c, "classification", {"medium_high", "high"}, {});
        thresholds.medium_high = get_number(c, "classification", "medium_high");
        thresholds.high = get_number(c, "classification", "high");
        if (thresholds.medium_high < 0.0 || thresholds.high > 1.0 ||
            thresholds.medium_high > thresholds.high) {
            throw SchemaError("classification needs 0 <= medium_high <= high <= 1");
        }
    }

    RuleBase rulebase(std::move(rules), std::move(catalogs), thresholds);
    const std::vector<Violation> violations = validate_rulebase(rulebase);
    if (!violations.empty()) {
        std::string message = "rulebase document failed validation:";
        for (const Violation& v : violations) {
            message += "\n  " + to_string(v);
        }
        throw ValidationError(message);
    }
    return rulebase;
}

RuleBase load_rulebase(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read rulebase file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_rulebase(buffer.str());
}

std::string serialize_rulebase(const RuleBase& rulebase) {
    ordered_json doc;
    doc["version"] = 1;
    doc["classification"] = {{"medium_high", rulebase.thresholds().medium_high},
                             {"high", rulebase.thresholds().high}};
    doc["factors"] = ordered_json::array();
    for (const LevelCatalog& catalog : rulebase.catalogs()) {
        ordered_json node;
        node["id"] = catalog.factor;
        node["levels"] = ordered_json::array();
        for (const Level& level : catalog.levels) {
            node["levels"].push_back({{"label", level.label}, {"degree", level.degree}});
        }
        doc["factors"].push_back(std::move(node));
    }
    doc["rules"] = ordered_json::array();
    for (const Rule& rule : rulebase.rules()) {
        ordered_json node;
        node["id"] = rule.id;
        node["title"] = rule.title;
        if (rule.cluster) {
            node["cluster"] = *rule.cluster;
        } else {
            node["cluster"] = nullptr;
        }
        node["subcluster"] = rule.subcluster;
        node["terms"] = ordered_json::array();
        for (const RuleTerm& term : rule.terms) {
            node["terms"].push_back({{"factor", term.factor}, {"negated", term.negated}});
        }
        node["gaussian"] = {{"a", rule.gaussian.a},
                            {"b", rule.gaussian.b},
                            {"sigma_x", rule.gaussian.sigma_x},
                            {"sigma_y", rule.gaussian.sigma_y},
                            {"peak", rule.gaussian.peak},
                            {"weight", rule.gaussian.weight}};
        node["degree_label"] = to_string(rule.degree_label);
        node["impact_label"] = to_string(rule.impact_label);
        if (!rule.aux_clusters.empty()) {
            node["aux_clusters"] = rule.aux_clusters;
        }
        doc["rules"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string rulebase_fingerprint(const RuleBase& rulebase) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_rulebase(rulebase))));
    return buf;
}

std::map<FactorId, double> resolve_case(const RuleBase& rulebase, const CaseRecord& record) {
    std::map<FactorId, double> resolved;
    for (const LevelCatalog& catalog : rulebase.catalogs()) {
        resolved[catalog.factor] = 0.0;
    }
    for (const auto& [factor, value] : record.assignments) {
        const LevelCatalog* catalog = rulebase.find_catalog(factor);
        if (!catalog) {
            throw UnknownFactorError("case '" + record.case_id + "': no catalog for factor '" +
                                     factor + "'");
        }
        double degree = 0.0;
        if (const std::string* label = std::get_if<std::string>(&value)) {
            try {
                degree = eval_level(*catalog, *label);
            } catch (const UnknownLevelError& e) {
                throw UnknownLevelError("case '" + record.case_id + "': " + e.what());
            }
        } else {
            degree = std::get<double>(value);
            if (!std::isfinite(degree)) {
                throw NonFiniteError("case '" + record.case_id + "': degree for factor '" +
                                     factor + "' must be finite");
            }
            if (degree < 0.0 || degree > 1.0) {
                throw OutOfRangeError("case '" + record.case_id + "': degree for factor '" +
                                      factor + "' must lie in [0, 1]");
            }
        }
        resolved[factor] = degree;
    }
    return resolved;
}

} // namespace femrisk
