#include "sarcoast/ggd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sarcoast/error.hpp"
#include "sarcoast/special.hpp"

namespace sarcoast {
namespace {

void require_valid(const GgdParams& p, const char* where) {
    if (!p.valid()) {
        std::ostringstream os;
        os << where << ": invalid GGD parameters (v=" << p.v << ", kappa=" << p.kappa
           << ", sigma=" << p.sigma << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

bool GgdParams::valid() const noexcept {
    return std::isfinite(v) && std::isfinite(kappa) && std::isfinite(sigma) && v != 0.0 &&
           kappa > 0.0 && sigma > 0.0;
}

double ggd_log_pdf(double a, const GgdParams& p) {
    require_valid(p, "ggd_log_pdf");
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("ggd_log_pdf: amplitude must be positive, got " + std::to_string(a));
    }
    const double log_ratio = std::log(a / p.sigma);
    return std::log(std::abs(p.v)) + p.kappa * std::log(p.kappa) - std::log(p.sigma) -
           std::lgamma(p.kappa) + (p.kappa * p.v - 1.0) * log_ratio -
           p.kappa * std::exp(p.v * log_ratio);
}

double ggd_pdf(double a, const GgdParams& p) { return std::exp(ggd_log_pdf(a, p)); }

std::vector<double> ggd_sample(const GgdParams& p, std::size_t n, Rng& rng) {
    require_valid(p, "ggd_sample");
    if (n == 0) {
        throw PreconditionError("ggd_sample: n must be >= 1");
    }
    std::gamma_distribution<double> gamma(p.kappa, 1.0);
    const double inv_v = 1.0 / p.v;
    std::vector<double> out(n);
    for (auto& x : out) {
        x = p.sigma * std::pow(gamma(rng) / p.kappa, inv_v);
    }
    return out;
}

LogCumulants log_cumulants_of_logs(std::span<const double> logs) {
    if (logs.size() < 3) {
        throw EstimationFailed("log_cumulants: need at least 3 samples, got " +
                               std::to_string(logs.size()));
    }
    const double n = static_cast<double>(logs.size());
    double sum = 0.0;
    for (double l : logs) sum += l;
    const double mean = sum / n;

    double m2 = 0.0;
    double m3 = 0.0;
    for (double l : logs) {
        const double d = l - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    return {mean, m2 / (n - 1.0), m3 / n};
}

LogCumulants log_cumulants(std::span<const double> samples) {
    if (samples.size() < 3) {
        throw EstimationFailed("log_cumulants: need at least 3 samples, got " +
                               std::to_string(samples.size()));
    }
    std::vector<double> logs;
    logs.reserve(samples.size());
    for (double a : samples) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw DomainError("log_cumulants: samples must be positive, got " + std::to_string(a));
        }
        logs.push_back(std::log(a));
    }
    return log_cumulants_of_logs(logs);
}

LogCumulants theoretical_log_cumulants(const GgdParams& p) {
    require_valid(p, "theoretical_log_cumulants");
    return {std::log(p.sigma) + (polygamma(0, p.kappa) - std::log(p.kappa)) / p.v,
            polygamma(1, p.kappa) / (p.v * p.v), polygamma(2, p.kappa) / (p.v * p.v * p.v)};
}

double log_skewness_ratio(double kappa) {
    const double t1 = polygamma(1, kappa);
    const double t2 = polygamma(2, kappa);
    return t2 * t2 / (t1 * t1 * t1);
}

GgdParams estimate_ggd_from_cumulants(const LogCumulants& lc, const EstimatorOptions& opts) {
    if (!(lc.c2 > opts.min_c2) || !std::isfinite(lc.c2) || !std::isfinite(lc.c3)) {
        throw EstimationFailed("estimate_ggd: degenerate log-variance");
    }
    const double target = lc.c3 * lc.c3 / (lc.c2 * lc.c2 * lc.c2);

    // The ratio is decreasing in kappa; scan log-spaced nodes for the cell
    // that brackets the target, then bisect inside it in log(kappa).
    constexpr int kScanSteps = 64;
    const double log_lo = std::log(opts.kappa_min);
    const double log_hi = std::log(opts.kappa_max);
    if (target > log_skewness_ratio(opts.kappa_min) || target < log_skewness_ratio(opts.kappa_max)) {
        throw EstimationFailed("estimate_ggd: no shape root in [" + std::to_string(opts.kappa_min) +
                               ", " + std::to_string(opts.kappa_max) + "]");
    }
    double lo = log_lo;
    double hi = log_hi;
    for (int i = 1; i <= kScanSteps; ++i) {
        const double node = log_lo + (log_hi - log_lo) * i / kScanSteps;
        if (log_skewness_ratio(std::exp(node)) <= target) {
            hi = node;
            lo = log_lo + (log_hi - log_lo) * (i - 1) / kScanSteps;
            break;
        }
    }

    double kappa = std::exp(0.5 * (lo + hi));
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        kappa = std::exp(mid);
        const double residual = log_skewness_ratio(kappa) - target;
        if (std::abs(residual) < opts.ratio_tol || hi - lo < 1e-15) break;
        if (residual > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    const double abs_v = std::sqrt(polygamma(1, kappa) / lc.c2);
    // psi2 < 0, so v and c3 carry opposite signs.
    const double v = lc.c3 > 0.0 ? -abs_v : abs_v;
    const double sigma = std::exp(lc.c1 - (polygamma(0, kappa) - std::log(kappa)) / v);
    GgdParams p{v, kappa, sigma};
    if (!p.valid()) {
        throw EstimationFailed("estimate_ggd: inversion produced non-finite parameters");
    }
    return p;
}

GgdParams estimate_ggd(std::span<const double> samples, const EstimatorOptions& opts) {
    if (samples.size() < std::max<std::size_t>(opts.min_samples, 3)) {
        throw EstimationFailed("estimate_ggd: " + std::to_string(samples.size()) +
                               " samples is below the minimum of " + std::to_string(opts.min_samples));
    }
    return estimate_ggd_from_cumulants(log_cumulants(samples), opts);
}

}  // namespace sarcoast
