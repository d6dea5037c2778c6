#pragma once

// Straightforward reference implementations used to cross-check the library.
// They trade speed for transparency and share no code with src/.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

/// Fraction of the n options whose membership in `selected` matches `key`
/// (both bit masks), counted one option at a time.
inline double membership_agreement(unsigned selected, unsigned key, int n) {
    int agree = 0;
    for (int i = 0; i < n; ++i) {
        const bool s = (selected >> i) & 1u;
        const bool k = (key >> i) & 1u;
        agree += (s == k) ? 1 : 0;
    }
    return static_cast<double>(agree) / n;
}

/// Welch by explicit DFT sums: periodic Hann, mean removal per segment,
/// one-sided. amplitude=true scales |X|^2 by 1/(sum w)^2 (doubled off DC and
/// Nyquist); otherwise by 1/(fs sum w^2) (doubled likewise) times df so that
/// the bins sum to the variance.
inline std::vector<double> welch(const std::vector<double>& y, double fs, std::size_t nperseg,
                                 std::size_t noverlap, bool amplitude) {
    const double pi = std::numbers::pi;
    std::vector<double> w(nperseg);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < nperseg; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(nperseg));
        s1 += w[i];
        s2 += w[i] * w[i];
    }
    const std::size_t nbins = nperseg / 2 + 1;
    const std::size_t hop = nperseg - noverlap;
    std::vector<double> acc(nbins, 0.0);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + nperseg <= y.size(); start += hop) {
        double mean = 0.0;
        for (std::size_t i = 0; i < nperseg; ++i) {
            mean += y[start + i];
        }
        mean /= static_cast<double>(nperseg);
        for (std::size_t k = 0; k < nbins; ++k) {
            std::complex<double> x{0.0, 0.0};
            for (std::size_t i = 0; i < nperseg; ++i) {
                const double ang = -2.0 * pi * static_cast<double>(k * i % nperseg) / static_cast<double>(nperseg);
                x += (y[start + i] - mean) * w[i] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            const bool edge = k == 0 || (nperseg % 2 == 0 && k == nperseg / 2);
            double p = std::norm(x);
            if (amplitude) {
                p /= s1 * s1;
                p *= edge ? 1.0 : 4.0;
            } else {
                const double df = fs / static_cast<double>(nperseg);
                p = p / (fs * s2) * (edge ? 1.0 : 2.0) * df;
            }
            acc[k] += p;
        }
        ++segments;
    }
    for (auto& a : acc) {
        a /= static_cast<double>(segments);
    }
    return acc;
}

struct Ols {
    double slope = 0.0;
    double intercept = 0.0;
    double se_hc0 = 0.0;  // White heteroskedasticity-consistent
};

/// Simple regression in centred form with the White sandwich.
inline Ols ols_white(const std::vector<double>& y, const std::vector<double>& t) {
    const double n = static_cast<double>(y.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sxx += (t[i] - tm) * (t[i] - tm);
        sxy += (t[i] - tm) * (y[i] - ym);
    }
    Ols r;
    r.slope = sxy / sxx;
    r.intercept = ym - r.slope * tm;
    double meat = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - r.intercept - r.slope * t[i];
        meat += (t[i] - tm) * (t[i] - tm) * e * e;
    }
    r.se_hc0 = std::sqrt(meat) / sxx;
    return r;
}

/// Newey-West slope standard error in centred form, Bartlett weights.
inline double newey_west_se(const std::vector<double>& y, const std::vector<double>& t, int lag) {
    const Ols fit = ols_white(y, t);
    const std::size_t n = y.size();
    double tm = 0.0;
    for (double v : t) {
        tm += v;
    }
    tm /= static_cast<double>(n);
    std::vector<double> u(n);
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - fit.intercept - fit.slope * t[i];
        u[i] = (t[i] - tm) * e;
        sxx += (t[i] - tm) * (t[i] - tm);
    }
    double meat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        meat += u[i] * u[i];
    }
    for (int l = 1; l <= lag; ++l) {
        const double w = 1.0 - static_cast<double>(l) / (lag + 1.0);
        double g = 0.0;
        for (std::size_t i = static_cast<std::size_t>(l); i < n; ++i) {
            g += u[i] * u[i - static_cast<std::size_t>(l)];
        }
        meat += 2.0 * w * g;
    }
    return std::sqrt(meat) / sxx;
}

}  // namespace oracle
