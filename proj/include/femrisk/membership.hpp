#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace femrisk {

// Factor ids are lower-case kebab-case strings, e.g. "relationship-partner",
// "sexual-violence". Relationship factors share the "relationship-" prefix;
// that prefix carries meaning (see validate_rulebase).
using FactorId = std::string;

// One step of an ordinal severity scale.
struct Level {
    std::string label;
    double degree = 0.0;

    bool operator==(const Level&) const = default;
};

// Ordinal membership catalog for one factor. Levels are stored least to most
// severe; degrees must be non-decreasing and lie in [0, 1].
struct LevelCatalog {
    FactorId factor;
    std::vector<Level> levels;

    bool operator==(const LevelCatalog&) const = default;
};

// Parameters of one rule's surface over the (x, y) risk plane:
//   g(x, y) = peak * exp(-((x-a)^2 / (2*sigma_x^2) + (y-b)^2 / (2*sigma_y^2)))
// peak scales amplitude, so g(a, b) = peak, not 1. weight is the rule's share
// in weighted aggregation; it is not part of the surface itself.
struct GaussianParams {
    double a = 0.0;
    double b = 0.0;
    double sigma_x = 1.0;
    double sigma_y = 1.0;
    double peak = 1.0;
    double weight = 1.0;

    bool operator==(const GaussianParams&) const = default;
};

// Canonical label form used for every catalog lookup: ASCII letters lowered,
// runs of whitespace collapsed to single spaces, ends trimmed.
std::string normalize_label(std::string_view label);

// Degree of `label` in `catalog` after normalization.
// Throws UnknownLevelError when the catalog has no such label.
double eval_level(const LevelCatalog& catalog, std::string_view label);

// Evaluates the rule surface at (x, y).
// Throws NonFiniteError on non-finite x or y; sigma validity is the
// catalog's parse/validate responsibility, not re-checked here.
double eval_gaussian(const GaussianParams& params, double x, double y);

// 1 - degree. Throws NonFiniteError / OutOfRangeError unless degree is a
// finite value in [0, 1]. Exact involution holds on dyadic degrees k*2^-53
// but not for every representable double; tests rely on that distinction.
double complement(double degree);

} // namespace femrisk
