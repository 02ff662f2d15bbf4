#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "femrisk/caseio.hpp"
#include "femrisk/errors.hpp"
#include "femrisk/inference.hpp"
#include "femrisk/report.hpp"
#include "femrisk/surface.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

femrisk::RuleBase load_or_canonical(const std::string& path) {
    if (path.empty()) {
        return femrisk::canonical_rulebase();
    }
    return femrisk::load_rulebase(path);
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw femrisk::IoError("cannot open '" + out_path + "' for writing");
    }
    out << content;
    if (!out) {
        throw femrisk::IoError("failed writing '" + out_path + "'");
    }
}

struct ScoreArgs {
    std::string cases_path;
    std::string rulebase_path;
    std::string aggregator = "weighted";
    std::string format = "json";
    std::string out_path;
};

int cmd_score(const ScoreArgs& args) {
    const femrisk::RuleBase rulebase = load_or_canonical(args.rulebase_path);
    const std::vector<femrisk::CaseRecord> cases =
        femrisk::load_cases(rulebase, args.cases_path);
    const femrisk::Aggregator aggregator = args.aggregator == "min"
                                               ? femrisk::Aggregator::Min
                                               : femrisk::Aggregator::Weighted;
    const femrisk::ScoreReport report = femrisk::score_cases(rulebase, cases, aggregator);
    write_output(args.out_path, args.format == "csv" ? femrisk::render_report_csv(report)
                                                     : femrisk::render_report_json(report));
    return kExitOk;
}

struct SurfaceArgs {
    std::string rule = "composite";
    double x_min = 0.0;
    double x_max = 6.0;
    double y_min = 0.0;
    double y_max = 6.0;
    int resolution = 101;
    std::string format = "json";
    std::string out_path;
};

int cmd_surface(const SurfaceArgs& args) {
    std::optional<int> rule_id = femrisk::kCompositeSurface;
    if (args.rule != "composite") {
        int id = 0;
        const char* first = args.rule.data();
        const char* last = args.rule.data() + args.rule.size();
        auto [ptr, ec] = std::from_chars(first, last, id);
        if (ec != std::errc() || ptr != last || id < 1) {
            std::cerr << "surface: --rule must be a positive rule id or 'composite'\n";
            return kExitUsage;
        }
        rule_id = id;
    }
    if (!(args.x_min < args.x_max) || !(args.y_min < args.y_max) || args.resolution < 2) {
        std::cerr << "surface: grid needs xmin < xmax, ymin < ymax, resolution >= 2\n";
        return kExitUsage;
    }
    const femrisk::RuleBase& rulebase = femrisk::canonical_rulebase();
    const femrisk::GridSpec spec{args.x_min, args.x_max, args.y_min, args.y_max,
                                 args.resolution};
    const femrisk::SurfaceData surface = femrisk::eval_surface(rulebase, rule_id, spec);
    const femrisk::SurfaceFormat format = args.format == "csv" ? femrisk::SurfaceFormat::Csv
                                                               : femrisk::SurfaceFormat::Json;
    write_output(args.out_path, femrisk::export_surface(surface, format));
    return kExitOk;
}

struct ValidateArgs {
    std::string rulebase_path;
};

int cmd_validate(const ValidateArgs& args) {
    femrisk::RuleBase rulebase;
    try {
        rulebase = load_or_canonical(args.rulebase_path);
    } catch (const femrisk::ValidationError& e) {
        std::cout << e.what() << "\n";
        std::cout << "FAIL: rulebase document is invalid\n";
        return kExitValidation;
    }

    femrisk::ValidationOptions options;
    options.canonical_weight_band = true;
    std::vector<femrisk::Violation> violations =
        femrisk::validate_rulebase(rulebase, options);

    const femrisk::AxiomSample sample = femrisk::default_axiom_sample(rulebase);
    const std::vector<femrisk::Violation> axiom_findings =
        femrisk::check_axioms(rulebase, sample);
    violations.insert(violations.end(), axiom_findings.begin(), axiom_findings.end());

    for (const femrisk::Violation& violation : violations) {
        std::cout << femrisk::to_string(violation) << "\n";
    }
    if (!violations.empty()) {
        std::cout << "FAIL: " << violations.size() << " violation(s)\n";
        return kExitValidation;
    }
    std::cout << "OK: " << rulebase.rules().size() << " rules, "
              << rulebase.catalogs().size() << " factor catalogs, axioms hold ("
              << femrisk::rulebase_fingerprint(rulebase) << ")\n";
    return kExitOk;
}

struct RulesArgs {
    std::string rulebase_path;
    int cluster = 0; // 0 = no filter
};

int cmd_rules(const RulesArgs& args) {
    const femrisk::RuleBase rulebase = load_or_canonical(args.rulebase_path);
    std::string out = "id\ttitle\tcluster\tdegree\tweight\n";
    for (const femrisk::Rule& rule : rulebase.rules()) {
        if (args.cluster > 0) {
            const bool primary = rule.cluster && *rule.cluster == args.cluster;
            const bool aux = std::find(rule.aux_clusters.begin(), rule.aux_clusters.end(),
                                       args.cluster) != rule.aux_clusters.end();
            if (!primary && !aux) {
                continue;
            }
        }
        char weight[32];
        std::snprintf(weight, sizeof(weight), "%g", rule.gaussian.weight);
        out += std::to_string(rule.id);
        out.push_back('\t');
        out += rule.title;
        out.push_back('\t');
        out += rule.cluster ? std::to_string(*rule.cluster) : "-";
        out.push_back('\t');
        out += femrisk::to_string(rule.degree_label);
        out.push_back('\t');
        out += weight;
        out.push_back('\n');
    }
    std::cout << out;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy femicide-risk scoring: rule surfaces, case evaluation, "
                 "rulebase validation"};
    app.require_subcommand(1);

    ScoreArgs score_args;
    CLI::App* score = app.add_subcommand("score", "Evaluate cases and report risk scores");
    score->add_option("--cases", score_args.cases_path,
                      "Case file (.csv or .json)")->required();
    score->add_option("--rulebase", score_args.rulebase_path,
                      "Rulebase document (defaults to the built-in model)");
    score->add_option("--aggregator", score_args.aggregator,
                      "Headline score: weighted (normalized sum) or min")
        ->check(CLI::IsMember({"weighted", "min"}));
    score->add_option("--format", score_args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    score->add_option("--out", score_args.out_path, "Output path (default stdout)");

    SurfaceArgs surface_args;
    CLI::App* surface = app.add_subcommand("surface", "Export a rule or composite surface");
    surface->add_option("--rule", surface_args.rule,
                        "Rule id or 'composite'")->required();
    surface->add_option("--xmin", surface_args.x_min, "Grid lower x bound");
    surface->add_option("--xmax", surface_args.x_max, "Grid upper x bound");
    surface->add_option("--ymin", surface_args.y_min, "Grid lower y bound");
    surface->add_option("--ymax", surface_args.y_max, "Grid upper y bound");
    surface->add_option("--resolution", surface_args.resolution, "Points per axis");
    surface->add_option("--format", surface_args.format, "Export format")
        ->check(CLI::IsMember({"csv", "json"}));
    surface->add_option("--out", surface_args.out_path, "Output path")->required();

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand(
        "validate", "Check rulebase structure and consistency axioms");
    validate->add_option("--rulebase", validate_args.rulebase_path,
                         "Rulebase document (defaults to the built-in model)");

    RulesArgs rules_args;
    CLI::App* rules = app.add_subcommand("rules", "List rules as tab-separated text");
    rules->add_option("--rulebase", rules_args.rulebase_path,
                      "Rulebase document (defaults to the built-in model)");
    rules->add_option("--cluster", rules_args.cluster,
                      "Only rules tagged with this cluster")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (score->parsed()) {
            return cmd_score(score_args);
        }
        if (surface->parsed()) {
            return cmd_surface(surface_args);
        }
        if (validate->parsed()) {
            return cmd_validate(validate_args);
        }
        return cmd_rules(rules_args);
    } catch (const femrisk::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const femrisk::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    }
}
