#include "femrisk/surface.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "femrisk/errors.hpp"

namespace femrisk {

using ordered_json = nlohmann::ordered_json;

std::vector<double> grid_axis(double lo, double hi, int resolution) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw NonFiniteError("grid bounds must be finite");
    }
    if (lo >= hi) {
        throw OutOfRangeError("grid needs lower bound < upper bound");
    }
    if (resolution < 2) {
        throw OutOfRangeError("grid resolution must be at least 2");
    }
    // Index arithmetic, not repeated addition: doubling resolution-1 then
    // reproduces shared coordinates bit-exactly.
    const double span = hi - lo;
    const double steps = resolution - 1;
    std::vector<double> axis(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        axis[static_cast<std::size_t>(i)] = lo + (i * span) / steps;
    }
    return axis;
}

SurfaceData eval_surface(const RuleBase& rulebase,
                         std::optional<int> rule_id,
                         const GridSpec& spec) {
    const Rule* rule = nullptr;
    if (rule_id) {
        rule = rulebase.find_rule(*rule_id);
        if (!rule) {
            throw UnknownRuleError("no rule with id " + std::to_string(*rule_id));
        }
    } else if (rulebase.rules().empty()) {
        throw EmptyInputError("composite surface needs at least one rule");
    }

    SurfaceData surface;
    surface.spec = spec;
    surface.rule_id = rule_id;
    surface.xs = grid_axis(spec.x_min, spec.x_max, spec.resolution);
    surface.ys = grid_axis(spec.y_min, spec.y_max, spec.resolution);
    surface.values.reserve(surface.xs.size() * surface.ys.size());

    std::vector<const Rule*> ordered;
    if (!rule) {
        for (const Rule& r : rulebase.rules()) {
            ordered.push_back(&r);
        }
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const Rule* l, const Rule* r) { return l->id < r->id; });
    }

    for (double x : surface.xs) {
        for (double y : surface.ys) {
            if (rule) {
                surface.values.push_back(eval_gaussian(rule->gaussian, x, y));
            } else {
                double sum = 0.0;
                for (const Rule* r : ordered) {
                    sum += r->gaussian.weight * eval_gaussian(r->gaussian, x, y);
                }
                surface.values.push_back(sum / rulebase.weight_sum());
            }
        }
    }
    return surface;
}

namespace {

void append_number(std::string& out, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
}

double parse_double_field(std::string_view field, std::size_t line_no, const char* column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw SyntaxError("surface csv line " + std::to_string(line_no) + ": column '" +
                          column + "' is not a number");
    }
    if (!std::isfinite(value)) {
        throw SchemaError("surface csv line " + std::to_string(line_no) + ": column '" +
                          column + "' must be finite");
    }
    return value;
}

std::string export_csv(const SurfaceData& surface) {
    std::string out = "x,y,value\n";
    std::size_t k = 0;
    for (double x : surface.xs) {
        for (double y : surface.ys) {
            append_number(out, x);
            out.push_back(',');
            append_number(out, y);
            out.push_back(',');
            append_number(out, surface.values[k++]);
            out.push_back('\n');
        }
    }
    return out;
}

SurfaceData parse_csv(std::string_view text) {
    SurfaceData surface;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    // xs/ys are recovered from the row-major layout: y values repeat in
    // blocks of the y-axis length, x changes once per block.
    std::vector<double> col_x;
    std::vector<double> col_y;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (!saw_header) {
            if (line != "x,y,value") {
                throw SchemaError("surface csv must start with header 'x,y,value'");
            }
            saw_header = true;
            continue;
        }
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
            line.find(',', c2 + 1) != std::string_view::npos) {
            throw SyntaxError("surface csv line " + std::to_string(line_no) +
                              ": expected exactly 3 columns");
        }
        col_x.push_back(parse_double_field(line.substr(0, c1), line_no, "x"));
        col_y.push_back(parse_double_field(line.substr(c1 + 1, c2 - c1 - 1), line_no, "y"));
        surface.values.push_back(parse_double_field(line.substr(c2 + 1), line_no, "value"));
    }
    if (!saw_header) {
        throw SchemaError("surface csv must start with header 'x,y,value'");
    }
    if (col_y.empty()) {
        throw SchemaError("surface csv has no data rows");
    }

    std::size_t y_len = 1;
    while (y_len < col_y.size() && col_y[y_len] != col_y[0]) {
        ++y_len;
    }
    if (col_y.size() % y_len != 0) {
        throw SchemaError("surface csv rows do not form a full grid");
    }
    const std::size_t x_len = col_y.size() / y_len;
    surface.ys.assign(col_y.begin(), col_y.begin() + static_cast<std::ptrdiff_t>(y_len));
    for (std::size_t i = 0; i < x_len; ++i) {
        surface.xs.push_back(col_x[i * y_len]);
    }
    for (std::size_t i = 0; i < col_y.size(); ++i) {
        if (col_x[i] != surface.xs[i / y_len] || col_y[i] != surface.ys[i % y_len]) {
            throw SchemaError("surface csv rows are not in row-major grid order");
        }
    }
    if (x_len < 2 || y_len < 2 || x_len != y_len) {
        throw SchemaError("surface csv grid must be square with resolution >= 2");
    }
    surface.spec = GridSpec{surface.xs.front(), surface.xs.back(), surface.ys.front(),
                            surface.ys.back(), static_cast<int>(x_len)};
    if (surface.spec.x_min >= surface.spec.x_max ||
        surface.spec.y_min >= surface.spec.y_max) {
        throw SchemaError("surface csv grid bounds are not increasing");
    }
    return surface;
}

std::string export_json(const SurfaceData& surface) {
    ordered_json doc;
    doc["grid"] = {{"x_min", surface.spec.x_min},
                   {"x_max", surface.spec.x_max},
                   {"y_min", surface.spec.y_min},
                   {"y_max", surface.spec.y_max},
                   {"resolution", surface.spec.resolution}};
    if (surface.rule_id) {
        doc["subject"] = *surface.rule_id;
    } else {
        doc["subject"] = "composite";
    }
    doc["xs"] = surface.xs;
    doc["ys"] = surface.ys;
    doc["values"] = ordered_json::array();
    const std::size_t y_len = surface.ys.size();
    for (std::size_t xi = 0; xi < surface.xs.size(); ++xi) {
        ordered_json row = ordered_json::array();
        for (std::size_t yi = 0; yi < y_len; ++yi) {
            row.push_back(surface.values[xi * y_len + yi]);
        }
        doc["values"].push_back(std::move(row));
    }
    return doc.dump() + "\n";
}

double json_finite_number(const ordered_json& v, const char* where) {
    if (!v.is_number()) {
        throw SchemaError(std::string(where) + " must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw SchemaError(std::string(where) + " must be finite");
    }
    return d;
}

SurfaceData parse_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("surface document: ") + e.what());
    }
    if (!doc.is_object()) {
        throw SchemaError("surface document must be an object");
    }
    for (const auto& item : doc.items()) {
        const std::string& key = item.key();
        if (key != "grid" && key != "subject" && key != "xs" && key != "ys" &&
            key != "values") {
            throw SchemaError("surface document has unknown key '" + key + "'");
        }
    }
    for (const char* key : {"grid", "subject", "xs", "ys", "values"}) {
        if (!doc.contains(key)) {
            throw SchemaError("surface document is missing key '" + std::string(key) + "'");
        }
    }

    SurfaceData surface;
    const ordered_json& grid = doc.at("grid");
    if (!grid.is_object()) {
        throw SchemaError("surface grid must be an object");
    }
    for (const auto& item : grid.items()) {
        const std::string& key = item.key();
        if (key != "x_min" && key != "x_max" && key != "y_min" && key != "y_max" &&
            key != "resolution") {
            throw SchemaError("surface grid has unknown key '" + key + "'");
        }
    }
    surface.spec.x_min = json_finite_number(grid.at("x_min"), "grid.x_min");
    surface.spec.x_max = json_finite_number(grid.at("x_max"), "grid.x_max");
    surface.spec.y_min = json_finite_number(grid.at("y_min"), "grid.y_min");
    surface.spec.y_max = json_finite_number(grid.at("y_max"), "grid.y_max");
    if (!grid.at("resolution").is_number_integer()) {
        throw SchemaError("grid.resolution must be an integer");
    }
    surface.spec.resolution = grid.at("resolution").get<int>();
    if (surface.spec.resolution < 2 || surface.spec.x_min >= surface.spec.x_max ||
        surface.spec.y_min >= surface.spec.y_max) {
        throw SchemaError("surface grid bounds must increase and resolution must be >= 2");
    }

    const ordered_json& subject = doc.at("subject");
    if (subject.is_string() && subject.get<std::string>() == "composite") {
        surface.rule_id = kCompositeSurface;
    } else if (subject.is_number_integer() && subject.get<int>() >= 1) {
        surface.rule_id = subject.get<int>();
    } else {
        throw SchemaError("surface subject must be a rule id or \"composite\"");
    }

    const auto n = static_cast<std::size_t>(surface.spec.resolution);
    for (const char* key : {"xs", "ys"}) {
        const ordered_json& axis = doc.at(key);
        if (!axis.is_array() || axis.size() != n) {
            throw SchemaError(std::string("surface ") + key +
                              " must be an array of length resolution");
        }
        std::vector<double>& target = key[0] == 'x' ? surface.xs : surface.ys;
        for (const ordered_json& v : axis) {
            target.push_back(json_finite_number(v, key));
        }
    }
    const ordered_json& rows = doc.at("values");
    if (!rows.is_array() || rows.size() != n) {
        throw SchemaError("surface values must hold one row per x coordinate");
    }
    for (const ordered_json& row : rows) {
        if (!row.is_array() || row.size() != n) {
            throw SchemaError("surface value rows must each hold resolution entries");
        }
        for (const ordered_json& v : row) {
            surface.values.push_back(json_finite_number(v, "values"));
        }
    }
    return surface;
}

} // namespace

std::string export_surface(const SurfaceData& surface, SurfaceFormat format) {
    return format == SurfaceFormat::Csv ? export_csv(surface) : export_json(surface);
}

SurfaceData parse_surface(std::string_view text, SurfaceFormat format) {
    return format == SurfaceFormat::Csv ? parse_csv(text) : parse_json(text);
}

} // namespace femrisk
