#include <cmath>
#include <random>

#include <doctest.h>

#include "femrisk/errors.hpp"
#include "femrisk/surface.hpp"

using namespace femrisk;

TEST_CASE("grid axis follows the index-multiplication formula") {
    const std::vector<double> axis = grid_axis(0.0, 6.0, 101);
    REQUIRE(axis.size() == 101);
    CHECK(axis.front() == 0.0);
    CHECK(axis.back() == 6.0);
    for (int i = 0; i < 101; ++i) {
        CHECK(axis[static_cast<std::size_t>(i)] == 0.0 + (i * 6.0) / 100.0);
    }
}

TEST_CASE("grid axis rejects bad bounds and resolutions") {
    CHECK_THROWS_AS(grid_axis(1.0, 1.0, 10), OutOfRangeError);
    CHECK_THROWS_AS(grid_axis(2.0, 1.0, 10), OutOfRangeError);
    CHECK_THROWS_AS(grid_axis(0.0, 1.0, 1), OutOfRangeError);
    CHECK_THROWS_AS(grid_axis(std::nan(""), 1.0, 10), NonFiniteError);
}

TEST_CASE("doubling the step count reproduces shared coordinates bit-exactly") {
    const std::vector<double> coarse = grid_axis(0.0, 6.0, 101);
    const std::vector<double> fine = grid_axis(0.0, 6.0, 201);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        CHECK(fine[2 * i] == coarse[i]);
    }

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> lo_draw(-10.0, 10.0);
    std::uniform_real_distribution<double> span_draw(0.1, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double lo = lo_draw(rng);
        const double hi = lo + span_draw(rng);
        const std::vector<double> a = grid_axis(lo, hi, 26);
        const std::vector<double> b = grid_axis(lo, hi, 51);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(b[2 * i] == a[i]);
        }
    }
}

TEST_CASE("single-rule surface matches the closed form pointwise") {
    const RuleBase& rb = canonical_rulebase();
    const GridSpec spec{0.0, 6.0, 0.0, 6.0, 61};
    const SurfaceData surface = eval_surface(rb, 1, spec);
    REQUIRE(surface.xs.size() == 61);
    REQUIRE(surface.values.size() == 61 * 61);

    const GaussianParams& g = rb.find_rule(1)->gaussian;
    for (std::size_t xi = 0; xi < surface.xs.size(); ++xi) {
        for (std::size_t yi = 0; yi < surface.ys.size(); ++yi) {
            const double dx = surface.xs[xi] - g.a;
            const double dy = surface.ys[yi] - g.b;
            const double expected =
                g.peak * std::exp(-(dx * dx / (2.0 * g.sigma_x * g.sigma_x) +
                                    dy * dy / (2.0 * g.sigma_y * g.sigma_y)));
            CHECK(surface.at(static_cast<int>(xi), static_cast<int>(yi)) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }

    // the 61-point axis hits (3.0, 3.2) exactly, pinning the frozen value
    CHECK(surface.xs[30] == 3.0);
    CHECK(surface.ys[32] == 3.2);
    CHECK(surface.at(30, 32) == doctest::Approx(0.5458775937413701).epsilon(1e-15));
}

TEST_CASE("composite surface is the normalized weighted sum") {
    const RuleBase& rb = canonical_rulebase();
    const GridSpec spec{0.0, 6.0, 0.0, 6.0, 21};
    const SurfaceData surface = eval_surface(rb, kCompositeSurface, spec);
    CHECK_FALSE(surface.rule_id.has_value());

    for (std::size_t xi = 0; xi < surface.xs.size(); ++xi) {
        for (std::size_t yi = 0; yi < surface.ys.size(); ++yi) {
            double sum = 0.0;
            for (const Rule& rule : rb.rules()) {
                sum += rule.gaussian.weight *
                       eval_gaussian(rule.gaussian, surface.xs[xi], surface.ys[yi]);
            }
            const double got = surface.at(static_cast<int>(xi), static_cast<int>(yi));
            CHECK(got == doctest::Approx(sum / 3.27).epsilon(1e-12));
            CHECK(got >= 0.0);
            CHECK(got <= 1.0);
        }
    }
}

TEST_CASE("surface evaluation rejects unknown subjects") {
    CHECK_THROWS_AS(eval_surface(canonical_rulebase(), 99, GridSpec{}), UnknownRuleError);
    const RuleBase empty({}, {});
    CHECK_THROWS_AS(eval_surface(empty, kCompositeSurface, GridSpec{}), EmptyInputError);
}

TEST_CASE("csv export writes 17-significant-digit row-major rows") {
    SurfaceData surface;
    surface.spec = GridSpec{0.0, 1.0, 0.0, 1.0, 2};
    surface.rule_id = 1;
    surface.xs = {0.0, 1.0};
    surface.ys = {0.0, 1.0};
    surface.values = {0.5, 0.25, 0.1, 1.0};
    CHECK(export_surface(surface, SurfaceFormat::Csv) ==
          "x,y,value\n"
          "0,0,0.5\n"
          "0,1,0.25\n"
          "1,0,0.10000000000000001\n"
          "1,1,1\n");
}

TEST_CASE("csv round-trip is byte-identical") {
    const GridSpec spec{0.0, 6.0, 0.0, 6.0, 21};
    const SurfaceData surface = eval_surface(canonical_rulebase(), 7, spec);
    const std::string once = export_surface(surface, SurfaceFormat::Csv);
    const SurfaceData parsed = parse_surface(once, SurfaceFormat::Csv);
    CHECK(export_surface(parsed, SurfaceFormat::Csv) == once);
    CHECK(parsed.values == surface.values);
    CHECK(parsed.xs == surface.xs);
    CHECK(parsed.ys == surface.ys);
    CHECK(parsed.spec == spec);
}

TEST_CASE("json round-trip is byte-identical and keeps the subject") {
    const GridSpec spec{0.0, 6.0, 0.0, 6.0, 21};

    const SurfaceData rule_surface = eval_surface(canonical_rulebase(), 7, spec);
    const std::string once = export_surface(rule_surface, SurfaceFormat::Json);
    const SurfaceData parsed = parse_surface(once, SurfaceFormat::Json);
    CHECK(parsed.rule_id == 7);
    CHECK(export_surface(parsed, SurfaceFormat::Json) == once);
    CHECK(parsed.values == rule_surface.values);

    const SurfaceData composite = eval_surface(canonical_rulebase(), kCompositeSurface, spec);
    const std::string ctext = export_surface(composite, SurfaceFormat::Json);
    const SurfaceData cparsed = parse_surface(ctext, SurfaceFormat::Json);
    CHECK_FALSE(cparsed.rule_id.has_value());
    CHECK(export_surface(cparsed, SurfaceFormat::Json) == ctext);
}

TEST_CASE("csv parser rejects malformed and misordered input") {
    CHECK_THROWS_AS(parse_surface("", SurfaceFormat::Csv), SchemaError);
    CHECK_THROWS_AS(parse_surface("a,b\n", SurfaceFormat::Csv), SchemaError);
    CHECK_THROWS_AS(parse_surface("x,y,value\n", SurfaceFormat::Csv), SchemaError);
    CHECK_THROWS_AS(parse_surface("x,y,value\n0,0\n", SurfaceFormat::Csv), SyntaxError);
    CHECK_THROWS_AS(parse_surface("x,y,value\n0,0,zero\n", SurfaceFormat::Csv), SyntaxError);

    const std::string good = export_surface(
        eval_surface(canonical_rulebase(), 1, GridSpec{0.0, 6.0, 0.0, 6.0, 3}),
        SurfaceFormat::Csv);

    // dropping the last row breaks the grid
    std::string truncated = good;
    truncated.erase(truncated.rfind('\n', truncated.size() - 2) + 1);
    CHECK_THROWS_AS(parse_surface(truncated, SurfaceFormat::Csv), SchemaError);

    // swapping two data rows breaks row-major order
    std::string swapped = good;
    const std::size_t first = swapped.find('\n') + 1;
    const std::size_t second = swapped.find('\n', first) + 1;
    const std::size_t third = swapped.find('\n', second) + 1;
    const std::string row1 = swapped.substr(first, second - first);
    const std::string row2 = swapped.substr(second, third - second);
    swapped.replace(first, third - first, row2 + row1);
    CHECK_THROWS_AS(parse_surface(swapped, SurfaceFormat::Csv), SchemaError);
}

TEST_CASE("json parser rejects structural defects") {
    const std::string good = export_surface(
        eval_surface(canonical_rulebase(), 1, GridSpec{0.0, 6.0, 0.0, 6.0, 3}),
        SurfaceFormat::Json);

    CHECK_THROWS_AS(parse_surface("{bad", SurfaceFormat::Json), SyntaxError);
    CHECK_THROWS_AS(parse_surface("[]", SurfaceFormat::Json), SchemaError);

    auto mutate = [&](const std::string& from, const std::string& to) {
        std::string doc = good;
        const std::size_t at = doc.find(from);
        REQUIRE(at != std::string::npos);
        doc.replace(at, from.size(), to);
        return doc;
    };
    CHECK_THROWS_AS(parse_surface(mutate("\"grid\"", "\"mesh\""), SurfaceFormat::Json),
                    SchemaError);
    CHECK_THROWS_AS(parse_surface(mutate("\"subject\":1", "\"subject\":\"rule one\""),
                                  SurfaceFormat::Json),
                    SchemaError);
    CHECK_THROWS_AS(parse_surface(mutate("\"resolution\":3", "\"resolution\":4"),
                                  SurfaceFormat::Json),
                    SchemaError);
    CHECK_THROWS_AS(parse_surface(mutate("\"resolution\":3", "\"resolution\":1"),
                                  SurfaceFormat::Json),
                    SchemaError);
}
