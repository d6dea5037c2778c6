#pragma once

#include <cmath>
#include <numeric>
#include <span>

namespace taudit::stats {

inline double mean(std::span<const double> x) {
    if (x.empty()) {
        return std::nan("");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
inline double sample_sd(std::span<const double> x) {
    if (x.size() < 2) {
        return 0.0;
    }
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace taudit::stats
