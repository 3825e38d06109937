#pragma once

#include <span>

namespace sarcoast {

/// Ridge added to every covariance estimate, in px^2.
inline constexpr double kSpatialRidge = 0.25;

/// Pixel-plane point; x is the column, y the row.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Symmetric 2x2 covariance.
struct Cov2 {
    double xx = 1.0;
    double xy = 0.0;
    double yy = 1.0;

    double det() const noexcept { return xx * yy - xy * xy; }
};

/// Centroid and covariance of a superpixel's member coordinates.
struct SpatialParams {
    Point2 mean;
    Cov2 cov;
};

/// Bivariate normal log density, -log(2 pi) - log(det)/2 - quadratic form/2.
/// Throws DomainError when the covariance is not positive definite.
double gaussian2_log_pdf(Point2 q, const SpatialParams& sp);

/// ML centroid and covariance (denominator n) plus `ridge` on the diagonal.
/// Throws PreconditionError on empty input.
SpatialParams estimate_spatial(std::span<const Point2> coords, double ridge = kSpatialRidge);

}  // namespace sarcoast
