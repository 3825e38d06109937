#include "sarcoast/special.hpp"

#include <cmath>
#include <string>

#include "sarcoast/error.hpp"

namespace sarcoast {
namespace {

constexpr double kAsymptoticStart = 15.0;

double digamma_asymptotic(double x) {
    const double r = 1.0 / (x * x);
    // Bernoulli series, B_2k / (2k x^2k)
    const double series =
        r * (1.0 / 12 -
             r * (1.0 / 120 -
                  r * (1.0 / 252 -
                       r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r * (1.0 / 12)))))));
    return std::log(x) - 0.5 / x - series;
}

double trigamma_asymptotic(double x) {
    const double r = 1.0 / (x * x);
    const double series =
        1.0 / 6 -
        r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * (7.0 / 6))))));
    return 1.0 / x + 0.5 * r + series * r / x;
}

double tetragamma_asymptotic(double x) {
    const double r = 1.0 / (x * x);
    const double series =
        0.5 - r * (1.0 / 6 - r * (1.0 / 6 - r * (3.0 / 10 - r * (5.0 / 6 - r * (691.0 / 210 - r * (35.0 / 2))))));
    return -r - r / x - series * r * r;
}

}  // namespace

double polygamma(int m, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("polygamma: argument must be positive and finite, got " + std::to_string(x));
    }
    if (m < 0 || m > 2) {
        throw DomainError("polygamma: order must be 0, 1 or 2, got " + std::to_string(m));
    }

    double shift = 0.0;
    switch (m) {
        case 0:
            while (x < kAsymptoticStart) {
                shift -= 1.0 / x;
                x += 1.0;
            }
            return shift + digamma_asymptotic(x);
        case 1:
            while (x < kAsymptoticStart) {
                shift += 1.0 / (x * x);
                x += 1.0;
            }
            return shift + trigamma_asymptotic(x);
        default:
            while (x < kAsymptoticStart) {
                shift -= 2.0 / (x * x * x);
                x += 1.0;
            }
            return shift + tetragamma_asymptotic(x);
    }
}

}  // namespace sarcoast
