#include "femrisk/caseio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "femrisk/errors.hpp"

namespace femrisk {

using ordered_json = nlohmann::ordered_json;

CaseFormat case_format_from_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".csv") {
        return CaseFormat::Csv;
    }
    if (ext == ".json") {
        return CaseFormat::Json;
    }
    throw SchemaError("cannot infer case format from '" + path.string() +
                      "' (expected .csv or .json)");
}

namespace {

std::string locate(std::string_view source, std::size_t line_no) {
    return std::string(source) + " line " + std::to_string(line_no);
}

// RFC 4180 style: fields separated by commas, optional double quotes with
// "" escapes. No multi-line fields.
std::vector<std::string> split_csv_line(std::string_view line, std::string_view source,
                                        std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    std::size_t i = 0;
    bool field_was_quoted = false;
    while (i < line.size()) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            current.push_back(c);
            ++i;
            continue;
        }
        if (c == '"') {
            if (!current.empty()) {
                throw SyntaxError(locate(source, line_no) + ": stray '\"' inside field");
            }
            quoted = true;
            field_was_quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
            field_was_quoted = false;
            ++i;
            continue;
        }
        if (field_was_quoted) {
            throw SyntaxError(locate(source, line_no) + ": text after closing '\"'");
        }
        current.push_back(c);
        ++i;
    }
    if (quoted) {
        throw SyntaxError(locate(source, line_no) + ": unterminated '\"'");
    }
    fields.push_back(std::move(current));
    return fields;
}

bool parse_full_double(std::string_view text, double& value) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

std::vector<CaseRecord> parse_csv_cases(const RuleBase& rulebase, std::string_view text,
                                        std::string_view source) {
    std::vector<CaseRecord> records;
    std::vector<FactorId> columns;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
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
        const std::vector<std::string> fields = split_csv_line(line, source, line_no);
        if (!saw_header) {
            if (fields.empty() || fields[0] != "case_id") {
                throw SchemaError(locate(source, line_no) +
                                  ": first header column must be 'case_id'");
            }
            std::set<FactorId> seen;
            for (std::size_t i = 1; i < fields.size(); ++i) {
                const FactorId& factor = fields[i];
                if (!rulebase.find_catalog(factor)) {
                    throw UnknownFactorError(locate(source, line_no) + ": column '" + factor +
                                             "' is not a catalog factor");
                }
                if (!seen.insert(factor).second) {
                    throw SchemaError(locate(source, line_no) + ": duplicate column '" +
                                      factor + "'");
                }
                columns.push_back(factor);
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != columns.size() + 1) {
            throw SyntaxError(locate(source, line_no) + ": expected " +
                              std::to_string(columns.size() + 1) + " fields, got " +
                              std::to_string(fields.size()));
        }
        CaseRecord record;
        record.case_id = fields[0];
        if (record.case_id.empty()) {
            throw SchemaError(locate(source, line_no) + ": empty case_id");
        }
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const std::string& cell = fields[i];
            if (cell.empty()) {
                continue;
            }
            const FactorId& factor = columns[i - 1];
            double degree = 0.0;
            if (parse_full_double(cell, degree)) {
                if (!std::isfinite(degree)) {
                    throw NonFiniteError(locate(source, line_no) + ": factor '" + factor +
                                         "' degree must be finite");
                }
                if (degree < 0.0 || degree > 1.0) {
                    throw OutOfRangeError(locate(source, line_no) + ": factor '" + factor +
                                          "' degree must lie in [0, 1]");
                }
                record.assignments[factor] = degree;
            } else {
                try {
                    eval_level(*rulebase.find_catalog(factor), cell);
                } catch (const UnknownLevelError& e) {
                    throw UnknownLevelError(locate(source, line_no) + ": " + e.what());
                }
                record.assignments[factor] = cell;
            }
        }
        records.push_back(std::move(record));
    }
    if (!saw_header) {
        throw SchemaError(std::string(source) + ": missing header row");
    }
    return records;
}

std::vector<CaseRecord> parse_json_cases(std::string_view text, std::string_view source) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string(source) + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw SchemaError(std::string(source) + ": case document must be an object");
    }
    for (const auto& item : doc.items()) {
        if (item.key() != "cases") {
            throw SchemaError(std::string(source) + ": unknown key '" + item.key() + "'");
        }
    }
    if (!doc.contains("cases") || !doc.at("cases").is_array()) {
        throw SchemaError(std::string(source) + ": missing 'cases' array");
    }

    std::vector<CaseRecord> records;
    std::size_t index = 0;
    for (const ordered_json& node : doc.at("cases")) {
        const std::string where = std::string(source) + " cases[" + std::to_string(index) + "]";
        ++index;
        if (!node.is_object()) {
            throw SchemaError(where + " must be an object");
        }
        for (const auto& item : node.items()) {
            const std::string& key = item.key();
            if (key != "case_id" && key != "assignments" && key != "xy") {
                throw SchemaError(where + " has unknown key '" + key + "'");
            }
        }
        if (!node.contains("case_id") || !node.at("case_id").is_string()) {
            throw SchemaError(where + " needs a string 'case_id'");
        }
        CaseRecord record;
        record.case_id = node.at("case_id").get<std::string>();
        if (record.case_id.empty()) {
            throw SchemaError(where + " case_id must be non-empty");
        }
        if (node.contains("assignments")) {
            const ordered_json& assignments = node.at("assignments");
            if (!assignments.is_object()) {
                throw SchemaError(where + ".assignments must be an object");
            }
            for (const auto& item : assignments.items()) {
                const ordered_json& value = item.value();
                if (value.is_string()) {
                    record.assignments[item.key()] = value.get<std::string>();
                } else if (value.is_number()) {
                    record.assignments[item.key()] = value.get<double>();
                } else {
                    throw SchemaError(where + ".assignments['" + item.key() +
                                      "'] must be a label or a number");
                }
            }
        }
        if (node.contains("xy")) {
            const ordered_json& xy = node.at("xy");
            if (!xy.is_array() || xy.size() != 2 || !xy[0].is_number() || !xy[1].is_number()) {
                throw SchemaError(where + ".xy must be an array of two numbers");
            }
            record.xy = {xy[0].get<double>(), xy[1].get<double>()};
        }
        records.push_back(std::move(record));
    }
    return records;
}

} // namespace

std::vector<CaseRecord> parse_cases(const RuleBase& rulebase,
                                    std::string_view text,
                                    CaseFormat format,
                                    std::string_view source_name) {
    std::vector<CaseRecord> records = format == CaseFormat::Csv
                                          ? parse_csv_cases(rulebase, text, source_name)
                                          : parse_json_cases(text, source_name);
    std::set<std::string> ids;
    for (const CaseRecord& record : records) {
        if (!ids.insert(record.case_id).second) {
            throw DuplicateCaseError(std::string(source_name) + ": duplicate case id '" +
                                     record.case_id + "'");
        }
        if (record.xy && !record.assignments.empty()) {
            throw CaseModeError(std::string(source_name) + ": case '" + record.case_id +
                                "' mixes coordinates with factor assignments");
        }
        if (!record.xy) {
            // Surfaces all assignments through the catalog checks so scoring
            // cannot fail on input shape later.
            const std::string prefix = std::string(source_name) + ": ";
            try {
                resolve_case(rulebase, record);
            } catch (const UnknownLevelError& e) {
                throw UnknownLevelError(prefix + e.what());
            } catch (const UnknownFactorError& e) {
                throw UnknownFactorError(prefix + e.what());
            } catch (const NonFiniteError& e) {
                throw NonFiniteError(prefix + e.what());
            } catch (const OutOfRangeError& e) {
                throw OutOfRangeError(prefix + e.what());
            }
        }
    }
    return records;
}

std::vector<CaseRecord> load_cases(const RuleBase& rulebase,
                                   const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read case file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_cases(rulebase, buffer.str(), case_format_from_path(path), path.string());
}

} // namespace femrisk
