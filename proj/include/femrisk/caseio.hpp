#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "femrisk/rulebase.hpp"

namespace femrisk {

enum class CaseFormat { Csv, Json };

// Picks the format from the file extension (.csv / .json, case-insensitive).
// Throws SchemaError for anything else.
CaseFormat case_format_from_path(const std::filesystem::path& path);

// Parses a batch of cases and validates every assignment against the
// rulebase's catalogs up front, so evaluation cannot fail later on input
// shape. Errors carry `source_name` plus the offending case id / line and
// column. Duplicate case ids throw DuplicateCaseError.
//
// CSV: first header column "case_id", remaining columns factor ids; empty
// cells mean unassigned; numeric cells are direct degrees in [0, 1]; other
// cells are catalog labels. JSON: {"cases": [{"case_id": ...,
// "assignments": {...}, "xy": [x, y]}, ...]}, unknown keys rejected.
std::vector<CaseRecord> parse_cases(const RuleBase& rulebase,
                                    std::string_view text,
                                    CaseFormat format,
                                    std::string_view source_name);

// parse_cases over a file's bytes. Throws IoError when unreadable.
std::vector<CaseRecord> load_cases(const RuleBase& rulebase,
                                   const std::filesystem::path& path);

} // namespace femrisk
