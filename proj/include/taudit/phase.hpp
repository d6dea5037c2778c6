#pragma once

#include <span>
#include <vector>

namespace taudit {

/// Least-squares fit of y ~ a cos(2 pi f t) + b sin(2 pi f t) on the
/// mean-centred series, written in cosine reference:
/// y ~ amplitude * cos(2 pi f t + phase), so a = A cos(phase), b = -A sin(phase).
struct PhaseFit {
    double freq = 0.0;
    double a = 0.0;
    double b = 0.0;
    double amplitude = 0.0;
    double phase_deg = 0.0;  // (-180, 180]
};

/// t_i = i / fs. Throws std::invalid_argument for N < 4 or freq outside
/// [0, fs/2]; DataError when the 2x2 normal matrix is singular (freq at 0 or
/// Nyquist).
PhaseFit fit_phase(std::span<const double> y, double fs, double freq);

/// One periodic component of a reconstruction.
struct Component {
    double freq = 0.0;       // cycles/day
    double amplitude = 0.0;
    double phase_deg = 0.0;  // cosine reference
};

Component to_component(const PhaseFit& fit);

struct Reconstruction {
    std::vector<double> signal;  // s(i / resolution), i = 0..floor(horizon*resolution)
    double min = 0.0;
    double max = 0.0;
    double peak_to_peak = 0.0;
};

inline constexpr double kDefaultHorizonDays = 700.0;
inline constexpr double kDefaultResolutionPerDay = 96.0;

/// s(t) = sum A_j cos(2 pi f_j t + phi_j) sampled over [0, horizon] days.
/// Throws std::invalid_argument on an empty list, a non-positive frequency,
/// horizon < 10x the longest period or resolution < 4x the highest frequency.
Reconstruction reconstruct(std::span<const Component> components, double horizon_days = kDefaultHorizonDays,
                           double resolution = kDefaultResolutionPerDay);

}  // namespace taudit
