#include "taudit/phase.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "taudit/error.hpp"

namespace taudit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDeg = 180.0 / std::numbers::pi;

}  // namespace

PhaseFit fit_phase(std::span<const double> y, double fs, double freq) {
    if (y.size() < 4) {
        throw std::invalid_argument("phase fit needs at least 4 samples");
    }
    if (!(fs > 0.0) || freq < 0.0 || freq > fs / 2.0) {
        throw std::invalid_argument("phase fit frequency must lie in [0, fs/2]");
    }
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

    Eigen::Matrix2d ctc = Eigen::Matrix2d::Zero();
    Eigen::Vector2d cty = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double arg = kTwoPi * freq * static_cast<double>(i) / fs;
        const Eigen::Vector2d basis(std::cos(arg), std::sin(arg));
        ctc += basis * basis.transpose();
        cty += basis * (y[i] - mean);
    }
    // Relative to the trace so that a vanishing sine column (DC, Nyquist) counts as singular.
    const double trace = ctc.trace();
    if (!(ctc.determinant() > 1e-10 * trace * trace)) {
        throw DataError("singular normal matrix in phase fit (frequency at DC or Nyquist)");
    }
    const Eigen::Vector2d coef = ctc.ldlt().solve(cty);

    PhaseFit fit;
    fit.freq = freq;
    fit.a = coef(0);
    fit.b = coef(1);
    fit.amplitude = std::hypot(fit.a, fit.b);
    fit.phase_deg = std::atan2(-fit.b, fit.a) * kDeg;
    if (fit.phase_deg <= -180.0) {
        fit.phase_deg += 360.0;
    }
    return fit;
}

Component to_component(const PhaseFit& fit) {
    return Component{fit.freq, fit.amplitude, fit.phase_deg};
}

Reconstruction reconstruct(std::span<const Component> components, double horizon_days, double resolution) {
    if (components.empty()) {
        throw std::invalid_argument("nothing to reconstruct");
    }
    double f_min = components.front().freq, f_max = components.front().freq;
    for (const auto& c : components) {
        if (!(c.freq > 0.0)) {
            throw std::invalid_argument("reconstruction components need positive frequencies");
        }
        f_min = std::min(f_min, c.freq);
        f_max = std::max(f_max, c.freq);
    }
    if (horizon_days < 10.0 / f_min) {
        throw std::invalid_argument("horizon shorter than 10x the longest component period");
    }
    if (resolution < 4.0 * f_max) {
        throw std::invalid_argument("resolution below 4x the highest component frequency");
    }

    const auto n = static_cast<std::size_t>(std::floor(horizon_days * resolution + 1e-9)) + 1;
    Reconstruction r;
    r.signal.assign(n, 0.0);
    for (const auto& c : components) {
        const double phase = c.phase_deg / kDeg;
        for (std::size_t i = 0; i < n; ++i) {
            r.signal[i] += c.amplitude * std::cos(kTwoPi * c.freq * static_cast<double>(i) / resolution + phase);
        }
    }
    const auto [lo, hi] = std::minmax_element(r.signal.begin(), r.signal.end());
    r.min = *lo;
    r.max = *hi;
    r.peak_to_peak = r.max - r.min;
    return r;
}

}  // namespace taudit
