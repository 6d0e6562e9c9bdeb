#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tcqfi/types.hpp"

namespace tcqfi {

// y = amplitude * x^exponent fitted by least squares in log-log coordinates.
// r_squared is the goodness of the log-log line.
struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
};

// Requires at least 3 points with strictly positive x and y.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts);

// y = slope * x + intercept by ordinary least squares; at least 2 distinct x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit linear_fit(const std::vector<std::pair<double, double>>& pts);

// First two numeric fields of each row (comma or whitespace separated);
// rows that do not start with two numbers (headers, comments) are skipped.
std::vector<std::pair<double, double>> read_xy_csv(const std::string& path);

} // namespace tcqfi
