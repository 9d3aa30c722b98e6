#include "fslab/fit.hpp"

#include <cmath>

namespace fslab {

FitResult fit_line(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw ExperimentError("line fit needs at least 3 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ExperimentError("line fit given a non-finite point");
        sx += x;
        sy += y;
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw ExperimentError("line fit needs a nondegenerate x range");

    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = points;
    for (const auto& [x, y] : points)
        fit.max_residual = std::max(fit.max_residual, std::abs(y - (fit.intercept + fit.slope * x)));
    return fit;
}

} // namespace fslab
