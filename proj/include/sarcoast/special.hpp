#pragma once

namespace sarcoast {

/// Polygamma function psi^(m)(x) for m in {0, 1, 2} (digamma, trigamma,
/// tetragamma) and x > 0. Upward recurrence to x >= 15 followed by the
/// Bernoulli asymptotic series; relative error well below 1e-12 away from
/// the digamma root.
double polygamma(int m, double x);

}  // namespace sarcoast
