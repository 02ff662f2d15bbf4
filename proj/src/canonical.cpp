#include "femrisk/rulebase.hpp"

namespace femrisk {

namespace {

struct RuleRow {
    int id;
    const char* title;
    int cluster; // 0 = untagged
    const char* subcluster;
    const char* factor1; // nullptr = no term
    bool negated1;
    const char* factor2;
    bool negated2;
    double a, b, sigma_x, sigma_y, peak;
    const char* degree;
    const char* impact;
    double weight;
    bool also_cluster9;
};

// clang-format off
constexpr RuleRow kRuleRows[] = {
    {1,  "Partner with sexual violence",                        1, "1.1", "relationship-partner",      false, "sexual-violence",   false, 2.5, 3.2, 0.5, 0.7, 0.90, "High",        "Significant", 0.08, false},
    {2,  "Partner without sexual violence",                     1, "1.1", "relationship-partner",      false, "sexual-violence",   true,  1.8, 2.9, 0.6, 0.9, 0.85, "Medium-High", "Moderate",    0.07, false},
    {3,  "Communication breakdown",                             8, "8.1", "incommunication",           false, nullptr,             false, 3.0, 4.1, 0.4, 0.5, 0.92, "High",        "Significant", 0.09, false},
    {4,  "Partner with threats",                                1, "1.2", "relationship-partner",      false, "threats",           false, 2.1, 3.5, 0.7, 0.8, 0.87, "Medium-High", "Moderate",    0.06, false},
    {5,  "Partner with public exposure",                        1, "1.3", "relationship-partner",      false, "public-exposure",   false, 3.5, 4.8, 0.3, 0.6, 0.95, "High",        "Significant", 0.10, false},
    {6,  "Mutilations with sexual violence",                    8, "8.3", "mutilations",               false, "sexual-violence",   false, 2.2, 3.1, 0.8, 0.9, 0.80, "Medium",      "Moderate",    0.05, false},
    {7,  "Workplace with harassment",                           2, "2.1", "relationship-work",         false, "harassment",        false, 3.3, 3.9, 0.4, 0.5, 0.88, "Medium-High", "Moderate",    0.07, false},
    {8,  "Shameful injuries",                                   8, "8.5", "shameful-injuries",         false, nullptr,             false, 2.4, 3.0, 0.6, 0.7, 0.83, "Medium",      "Moderate",    0.06, true},
    {9,  "Communication breakdown with sexual violence",        8, "8.1", "incommunication",           false, "sexual-violence",   false, 1.9, 2.7, 0.7, 0.8, 0.75, "Medium",      "Moderate",    0.04, true},
    {10, "Partner with physical injuries",                      1, "1.4", "relationship-partner",      false, "physical-injuries", false, 3.2, 4.5, 0.5, 0.6, 0.90, "High",        "Significant", 0.08, false},
    {11, "Partner relationship without mutilations",            9, "",    "relationship-partner",      true,  "mutilations",       false, 2.8, 3.3, 0.6, 0.7, 0.82, "Medium",      "Moderate",    0.05, false},
    {12, "Social isolation with harassment",                    8, "8.6", "isolation-social",          false, "harassment",        false, 3.1, 4.0, 0.4, 0.5, 0.89, "Medium-High", "Moderate",    0.07, false},
    {13, "Public exposure with threats",                        8, "8.2", "public-exposure",           false, "threats",           false, 2.3, 2.9, 0.7, 0.8, 0.81, "Medium",      "Moderate",    0.05, false},
    {14, "Workplace with sexual violence",                      2, "2.2", "relationship-work",         false, "sexual-violence",   false, 3.4, 4.7, 0.3, 0.4, 0.93, "High",        "Significant", 0.09, false},
    {15, "Deprivation of liberty with physical injuries",       8, "8.5", "deprivation-of-liberty",    false, "physical-injuries", false, 2.0, 3.6, 0.5, 0.6, 0.77, "Medium",      "Moderate",    0.04, true},
    {16, "Workplace subordination with harassment",             2, "2.1", "labor-subordination",       false, "harassment",        false, 2.7, 3.2, 0.6, 0.7, 0.84, "Medium",      "Moderate",    0.06, false},
    {17, "Physical isolation with sexual violence",             8, "8.6", "isolation-physical",        false, "sexual-violence",   false, 3.6, 4.9, 0.3, 0.5, 0.91, "High",        "Significant", 0.08, false},
    {18, "Friendship with threats",                             3, "3.1", "relationship-friendship",   false, "threats",           false, 2.4, 2.8, 0.7, 0.8, 0.80, "Medium",      "Moderate",    0.05, false},
    {19, "Dating with physical injuries",                       4, "4.1", "relationship-dating",       false, "physical-injuries", false, 3.0, 4.1, 0.4, 0.6, 0.87, "Medium-High", "Moderate",    0.07, false},
    {20, "Indecent exposure with sexual violence",              9, "",    "indecent-exposure",         false, "sexual-violence",   false, 2.5, 3.3, 0.5, 0.7, 0.85, "Medium-High", "Moderate",    0.06, false},
    {21, "Digital isolation with harassment",                   8, "8.6", "isolation-digital",         false, "harassment",        false, 3.2, 4.6, 0.5, 0.6, 0.90, "High",        "Significant", 0.09, false},
    {22, "Consanguinity with sexual violence",                  7, "7.1", "relationship-consanguinity",false, "sexual-violence",   false, 2.8, 3.7, 0.6, 0.8, 0.83, "Medium",      "Moderate",    0.05, false},
    {23, "Marriage with sexual violence",                       5, "5.1", "relationship-marriage",     false, "sexual-violence",   false, 3.5, 4.8, 0.3, 0.5, 0.92, "High",        "Significant", 0.10, false},
    {24, "Public exposure with sexual violence",                8, "8.2", "public-exposure",           false, "sexual-violence",   false, 2.2, 3.1, 0.8, 0.9, 0.76, "Medium",      "Moderate",    0.04, false},
    {25, "Mutilations with threats",                            8, "8.3", "mutilations",               false, "threats",           false, 3.3, 3.9, 0.4, 0.6, 0.88, "Medium-High", "Moderate",    0.07, false},
    {26, "Surface-only rule 26",                                0, "",    nullptr,                     false, nullptr,             false, 2.4, 3.2, 0.7, 0.8, 0.82, "Medium",      "Moderate",    0.06, false},
    {27, "Friendship with mutilations",                         3, "3.2", "relationship-friendship",   false, "mutilations",       false, 1.9, 2.6, 0.7, 0.9, 0.74, "Medium",      "Moderate",    0.04, false},
    {28, "Communication breakdown with public exposure",        8, "8.1", "incommunication",           false, "public-exposure",   false, 3.1, 4.3, 0.5, 0.7, 0.90, "High",        "Significant", 0.08, false},
    {29, "Dating with threats",                                 4, "4.2", "relationship-dating",       false, "threats",           false, 2.7, 3.4, 0.6, 0.8, 0.81, "Medium",      "Moderate",    0.05, false},
    {30, "Sexual violence with harassment",                     8, "8.4", "sexual-violence",           false, "harassment",        false, 3.4, 4.7, 0.3, 0.4, 0.93, "High",        "Significant", 0.10, true},
    {31, "Workplace subordination with sexual violence",        2, "2.2", "labor-subordination",       false, "sexual-violence",   false, 2.0, 3.5, 0.5, 0.7, 0.79, "Medium",      "Moderate",    0.04, false},
    {32, "Public exposure with mutilations",                    8, "8.2", "public-exposure",           false, "mutilations",       false, 2.6, 3.8, 0.6, 0.9, 0.85, "Medium-High", "Moderate",    0.06, false},
    {33, "Marriage with communication breakdown",               5, "5.2", "relationship-marriage",     false, "incommunication",   false, 3.0, 4.2, 0.4, 0.5, 0.88, "Medium-High", "Moderate",    0.08, false},
    {34, "Sexual violence with communication issues",           8, "8.4", "sexual-violence",           false, "incommunication",   false, 2.3, 2.9, 0.7, 0.8, 0.77, "Medium",      "Moderate",    0.05, false},
    {35, "Surface-only rule 35",                                0, "",    nullptr,                     false, nullptr,             false, 3.5, 4.8, 0.3, 0.5, 0.91, "High",        "Significant", 0.09, false},
    {36, "Friendship with indecent exposure",                   3, "3.3", "relationship-friendship",   false, "indecent-exposure", false, 2.1, 3.0, 0.8, 0.9, 0.75, "Medium",      "Moderate",    0.04, false},
    {37, "Trust-based relationship with harassment",            6, "6.1", "relationship-trust",        false, "harassment",        false, 3.3, 4.4, 0.5, 0.7, 0.89, "Medium-High", "Moderate",    0.07, false},
    {38, "Mutilations with physical isolation",                 8, "8.3", "mutilations",               false, "isolation-physical",false, 2.4, 3.1, 0.7, 0.8, 0.82, "Medium",      "Moderate",    0.06, false},
    {39, "Mutilations with harassment",                         8, "8.3", "mutilations",               false, "harassment",        false, 1.8, 2.7, 0.6, 0.9, 0.74, "Medium",      "Moderate",    0.04, false},
    {40, "Surface-only rule 40",                                0, "",    nullptr,                     false, nullptr,             false, 3.2, 4.5, 0.5, 0.6, 0.90, "High",        "Significant", 0.08, false},
    {41, "Friendship with communication breakdown",             3, "3.4", "relationship-friendship",   false, "incommunication",   false, 2.8, 3.6, 0.6, 0.8, 0.83, "Medium",      "Moderate",    0.05, false},
    {42, "Dating with mutilations",                             4, "4.3", "relationship-dating",       false, "mutilations",       false, 3.1, 4.0, 0.4, 0.5, 0.87, "Medium-High", "Moderate",    0.07, false},
    {43, "Marriage with mutilations",                           5, "5.3", "relationship-marriage",     false, "mutilations",       false, 2.3, 2.9, 0.7, 0.8, 0.81, "Medium",      "Moderate",    0.05, false},
    {44, "Communication breakdown with mutilations",            8, "8.1", "incommunication",           false, "mutilations",       false, 3.4, 4.7, 0.3, 0.4, 0.93, "High",        "Significant", 0.09, false},
    {45, "Surface-only rule 45",                                0, "",    nullptr,                     false, nullptr,             false, 2.5, 3.4, 0.5, 0.7, 0.85, "Medium-High", "Moderate",    0.06, false},
    {46, "Dating with communication breakdown",                 4, "4.4", "relationship-dating",       false, "incommunication",   false, 3.0, 4.1, 0.4, 0.6, 0.87, "Medium-High", "Moderate",    0.07, false},
    {47, "Communication breakdown with indecent exposure",      8, "8.1", "incommunication",           false, "indecent-exposure", false, 2.7, 3.5, 0.6, 0.7, 0.84, "Medium",      "Moderate",    0.05, false},
    {48, "Workplace subordination with mutilations",            2, "2.3", "labor-subordination",       false, "mutilations",       false, 3.6, 4.9, 0.3, 0.5, 0.91, "High",        "Significant", 0.10, false},
    {49, "Communication breakdown with harassment",             8, "8.1", "incommunication",           false, "harassment",        false, 2.2, 3.1, 0.8, 0.9, 0.76, "Medium",      "Moderate",    0.04, false},
    {50, "Trust-based relationship with communication breakdown",6,"6.2", "relationship-trust",        false, "incommunication",   false, 3.3, 4.4, 0.5, 0.6, 0.89, "Medium-High", "Moderate",    0.08, false},
};
// clang-format on

LevelCatalog relationship_catalog(const char* factor) {
    return {factor,
            {{"no prior relationship", 0.1},
             {"distant", 0.4},
             {"close", 0.7},
             {"extremely close", 1.0}}};
}

LevelCatalog condition_catalog(const char* factor) {
    return {factor, {{"none", 0.0}, {"mild", 0.3}, {"moderate", 0.7}, {"severe", 1.0}}};
}

std::vector<LevelCatalog> build_catalogs() {
    std::vector<LevelCatalog> catalogs;
    for (const char* factor : {"relationship-partner", "relationship-friendship",
                               "relationship-dating", "relationship-marriage",
                               "relationship-trust", "relationship-consanguinity",
                               "relationship-work"}) {
        catalogs.push_back(relationship_catalog(factor));
    }
    catalogs.push_back({"sexual-violence",
                        {{"none", 0.0},
                         {"low or sporadic", 0.4},
                         {"moderate", 0.8},
                         {"high and frequent", 1.0}}});
    for (const char* factor : {"isolation-physical", "isolation-social", "isolation-digital"}) {
        catalogs.push_back(
            {factor, {{"none", 0.0}, {"mild", 0.3}, {"partial", 0.7}, {"total", 1.0}}});
    }
    catalogs.push_back(
        {"threats",
         {{"none", 0.0}, {"sporadic", 0.5}, {"moderate", 0.8}, {"frequent and severe", 1.0}}});
    catalogs.push_back(
        {"mutilations", {{"none", 0.0}, {"minor", 0.3}, {"moderate", 0.7}, {"severe", 1.0}}});
    catalogs.push_back({"public-exposure",
                        {{"none", 0.0},
                         {"mild", 0.3},
                         {"moderate", 0.7},
                         {"public humiliation", 1.0}}});
    catalogs.push_back({"labor-subordination",
                        {{"none", 0.0}, {"mild", 0.3}, {"moderate", 0.7}, {"extreme", 1.0}}});
    for (const char* factor : {"harassment", "physical-injuries", "incommunication",
                               "deprivation-of-liberty", "indecent-exposure",
                               "shameful-injuries"}) {
        catalogs.push_back(condition_catalog(factor));
    }
    return catalogs;
}

RuleBase build_canonical() {
    std::vector<Rule> rules;
    rules.reserve(std::size(kRuleRows));
    for (const RuleRow& row : kRuleRows) {
        Rule rule;
        rule.id = row.id;
        rule.title = row.title;
        if (row.cluster > 0) {
            rule.cluster = row.cluster;
        }
        rule.subcluster = row.subcluster;
        if (row.factor1) {
            rule.terms.push_back({row.factor1, row.negated1});
        }
        if (row.factor2) {
            rule.terms.push_back({row.factor2, row.negated2});
        }
        rule.gaussian = {row.a, row.b, row.sigma_x, row.sigma_y, row.peak, row.weight};
        rule.degree_label = risk_category_from_string(row.degree);
        rule.impact_label = impact_from_string(row.impact);
        if (row.also_cluster9) {
            rule.aux_clusters.push_back(9);
        }
        rules.push_back(std::move(rule));
    }
    return RuleBase(std::move(rules), build_catalogs(), ClassificationThresholds{});
}

} // namespace

const RuleBase& canonical_rulebase() {
    static const RuleBase instance = build_canonical();
    return instance;
}

} // namespace femrisk
