#include "sarcoast/spatial.hpp"

#include <cmath>
#include <numbers>

#include "sarcoast/error.hpp"

namespace sarcoast {

double gaussian2_log_pdf(Point2 q, const SpatialParams& sp) {
    const Cov2& c = sp.cov;
    const double det = c.det();
    if (!(det > 0.0) || !(c.xx > 0.0) || !std::isfinite(det)) {
        throw DomainError("gaussian2_log_pdf: covariance is not positive definite");
    }
    const double dx = q.x - sp.mean.x;
    const double dy = q.y - sp.mean.y;
    // (dx, dy) Sigma^-1 (dx, dy)^T with the explicit 2x2 inverse
    const double quad = (c.yy * dx * dx - 2.0 * c.xy * dx * dy + c.xx * dy * dy) / det;
    return -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det) - 0.5 * quad;
}

SpatialParams estimate_spatial(std::span<const Point2> coords, double ridge) {
    if (coords.empty()) {
        throw PreconditionError("estimate_spatial: no coordinates");
    }
    const double n = static_cast<double>(coords.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& p : coords) {
        sx += p.x;
        sy += p.y;
    }
    const Point2 mean{sx / n, sy / n};

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : coords) {
        const double dx = p.x - mean.x;
        const double dy = p.y - mean.y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    return {mean, {sxx / n + ridge, sxy / n, syy / n + ridge}};
}

}  // namespace sarcoast
