// numerics.hpp — Small numeric helpers shared across modules (log-space sums)

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace spinprobe::num {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b) without overflow; tolerates -inf arguments.
inline double logsumexp(double a, double b) {
    const double m = std::max(a, b);
    if (!std::isfinite(m)) return m; // both -inf (or an inf/nan propagates)
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log(Σ_i e^{x_i}) without overflow; -inf terms contribute nothing.
inline double logsumexp(std::span<const double> xs) {
    double m = kNegInf;
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

} // namespace spinprobe::num
