#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sarcoast {

/// Generalised Gamma parameters: power `v`, shape `kappa`, scale `sigma`.
///
/// Density for a > 0:
///   |v| kappa^kappa / (sigma Gamma(kappa)) (a/sigma)^(kappa v - 1)
///       exp(-kappa (a/sigma)^v)
///
/// `v < 0` selects the inverse-GGD branch.
struct GgdParams {
    double v = 1.0;
    double kappa = 1.0;
    double sigma = 1.0;

    bool valid() const noexcept;
    friend bool operator==(const GgdParams&, const GgdParams&) = default;
};

/// Sample cumulants of log-amplitudes (second-kind cumulants).
struct LogCumulants {
    double c1 = 0.0;  ///< mean of log a
    double c2 = 0.0;  ///< variance of log a, denominator n - 1
    double c3 = 0.0;  ///< third central moment of log a, denominator n
};

using Rng = std::mt19937_64;

double ggd_pdf(double a, const GgdParams& p);

/// log of ggd_pdf, evaluated entirely in log space. Stable for large kappa.
double ggd_log_pdf(double a, const GgdParams& p);

/// Draws n amplitudes as sigma * (X / kappa)^(1/v) with X ~ Gamma(kappa, 1).
std::vector<double> ggd_sample(const GgdParams& p, std::size_t n, Rng& rng);

/// Cumulants of log(samples). Requires at least 3 strictly positive samples.
LogCumulants log_cumulants(std::span<const double> samples);

/// Same as log_cumulants but the caller already took logs.
LogCumulants log_cumulants_of_logs(std::span<const double> log_samples);

/// Population log-cumulants of a GGD:
///   c1 = log sigma + (psi(kappa) - log kappa) / v
///   c2 = psi1(kappa) / v^2
///   c3 = psi2(kappa) / v^3
LogCumulants theoretical_log_cumulants(const GgdParams& p);

struct EstimatorOptions {
    std::size_t min_samples = 30;
    double kappa_min = 0.05;
    double kappa_max = 500.0;
    /// Residual tolerance on the skewness-ratio equation.
    double ratio_tol = 1e-10;
    /// c2 at or below this is treated as constant data.
    double min_c2 = 1e-12;
};

/// The ratio psi2(kappa)^2 / psi1(kappa)^3, strictly decreasing from 4 to 0.
double log_skewness_ratio(double kappa);

/// Method-of-log-cumulants inversion. Throws EstimationFailed when c2 is
/// degenerate or the kappa equation has no root inside the bracket.
GgdParams estimate_ggd_from_cumulants(const LogCumulants& lc, const EstimatorOptions& opts = {});

/// Throws EstimationFailed for fewer than opts.min_samples samples and
/// DomainError for non-positive samples.
GgdParams estimate_ggd(std::span<const double> samples, const EstimatorOptions& opts = {});

}  // namespace sarcoast
