#pragma once

#include <utility>
#include <vector>

#include "fslab/errors.hpp"

namespace fslab {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::vector<std::pair<double, double>> points;
};

// Ordinary least squares on (x, y) pairs; needs >= 3 points spanning a
// nondegenerate x range.
FitResult fit_line(const std::vector<std::pair<double, double>>& points);

} // namespace fslab
