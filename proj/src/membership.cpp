#include "femrisk/membership.hpp"

#include <cctype>
#include <cmath>

#include "femrisk/errors.hpp"

namespace femrisk {

std::string normalize_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    bool pending_space = false;
    for (char c : label) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isspace(uc)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(uc)));
    }
    return out;
}

double eval_level(const LevelCatalog& catalog, std::string_view label) {
    const std::string wanted = normalize_label(label);
    for (const Level& level : catalog.levels) {
        if (normalize_label(level.label) == wanted) {
            return level.degree;
        }
    }
    throw UnknownLevelError("factor '" + catalog.factor + "' has no level '" + wanted + "'");
}

double eval_gaussian(const GaussianParams& params, double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw NonFiniteError("gaussian evaluation requires finite coordinates");
    }
    const double dx = x - params.a;
    const double dy = y - params.b;
    const double ex = (dx * dx) / (2.0 * params.sigma_x * params.sigma_x);
    const double ey = (dy * dy) / (2.0 * params.sigma_y * params.sigma_y);
    return params.peak * std::exp(-(ex + ey));
}

double complement(double degree) {
    if (!std::isfinite(degree)) {
        throw NonFiniteError("complement requires a finite degree");
    }
    if (degree < 0.0 || degree > 1.0) {
        throw OutOfRangeError("complement requires a degree in [0, 1]");
    }
    return 1.0 - degree;
}

} // namespace femrisk
