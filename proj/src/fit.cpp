#include "tcqfi/fit.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tcqfi {

LinearFit linear_fit(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) throw ValidationError("linear_fit: need at least 2 points");
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ValidationError("linear_fit: non-finite input point");
        sx += x;
        sy += y;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0) throw ValidationError("linear_fit: all x values coincide");

    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = syy - f.slope * sxy; // residual sum of squares
    if (syy <= 0.0) {
        f.r_squared = 1.0; // constant y fitted exactly by slope 0
    } else {
        f.r_squared = 1.0 - std::max(0.0, ss_res) / syy;
    }
    return f;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) throw ValidationError("fit_power_law: need at least 3 points");
    std::vector<std::pair<double, double>> logs;
    logs.reserve(pts.size());
    for (const auto& [x, y] : pts) {
        if (!(x > 0.0) || !(y > 0.0))
            throw ValidationError("fit_power_law: points must have positive x and y");
        logs.emplace_back(std::log(x), std::log(y));
    }
    LinearFit lf = linear_fit(logs);
    PowerLawFit f;
    f.exponent = lf.slope;
    f.amplitude = std::exp(lf.intercept);
    f.r_squared = lf.r_squared;
    return f;
}

std::vector<std::pair<double, double>> read_xy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line) {
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        }
        // first two numeric fields of the row; leading label columns (e.g. a
        // series name) and non-numeric rows (headers, comments) are skipped
        std::istringstream row(line);
        std::string field;
        double xy[2];
        int got = 0;
        while (got < 2 && row >> field) {
            char* end = nullptr;
            double v = std::strtod(field.c_str(), &end);
            if (end != field.c_str() && *end == '\0') xy[got++] = v;
        }
        if (got == 2) pts.emplace_back(xy[0], xy[1]);
    }
    return pts;
}

} // namespace tcqfi
