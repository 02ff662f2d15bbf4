#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "femrisk/rulebase.hpp"

namespace femrisk {

// Regular evaluation grid. Coordinates come from index arithmetic,
//   x_i = x_min + (i * (x_max - x_min)) / (resolution - 1),
// so halving the step (resolution 2n-1 vs n) reproduces shared coordinates
// bit-exactly. Invariants: x_min < x_max, y_min < y_max, resolution >= 2.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 6.0;
    double y_min = 0.0;
    double y_max = 6.0;
    int resolution = 101;

    bool operator==(const GridSpec&) const = default;
};

// Materialized axis for one grid dimension. Throws OutOfRangeError /
// NonFiniteError on invalid bounds or resolution.
std::vector<double> grid_axis(double lo, double hi, int resolution);

// A surface evaluated over a grid. `rule_id` empty means the composite
// (normalized weighted) surface. Coordinate axes are materialized so that
// exports reproduce parsed files byte for byte instead of re-deriving
// coordinates from the spec.
struct SurfaceData {
    GridSpec spec;
    std::optional<int> rule_id;
    std::vector<double> xs; // size == spec.resolution
    std::vector<double> ys; // size == spec.resolution
    std::vector<double> values; // row-major over (x index, y index)

    double at(int xi, int yi) const { return values[static_cast<std::size_t>(xi) * ys.size() + yi]; }
};

inline constexpr std::optional<int> kCompositeSurface = std::nullopt;

enum class SurfaceFormat { Csv, Json };

// Evaluates one rule's surface (rule_id set) or the composite surface
// (kCompositeSurface) over the grid. Composite points are the weighted sum
// of all rule surfaces divided by weight_sum, accumulated in ascending
// rule-id order. Throws UnknownRuleError for absent ids and EmptyInputError
// for a composite over an empty rulebase.
SurfaceData eval_surface(const RuleBase& rulebase,
                         std::optional<int> rule_id,
                         const GridSpec& spec);

// CSV: header "x,y,value", one row per point, row-major, numbers printed
// with 17 significant digits (exact binary64 round-trip). JSON: grid spec,
// subject, and nested value rows; numbers in shortest round-trip form.
std::string export_surface(const SurfaceData& surface, SurfaceFormat format);

// Inverse of export_surface for both formats. Throws SyntaxError on
// malformed text and SchemaError on structural defects (bad header, ragged
// grid, unknown keys, non-finite values).
SurfaceData parse_surface(std::string_view text, SurfaceFormat format);

} // namespace femrisk
