#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "taudit/series.hpp"

namespace taudit {

struct SineComponent {
    double amplitude = 0.0;
    double freq = 0.0;       // cycles per time unit
    double phase_deg = 0.0;  // sine reference: A sin(2 pi f t + phase)
};

/// Default origin for synthetic series: Monday 2025-08-04 00:00 UTC.
Instant default_synth_origin();

/// x(t) = offset + sum A_i sin(2 pi f_i t + phi_i) + N(0, noise_sd^2), t = i / fs,
/// one replicate per slot. `fs` and the frequencies are per `time_unit`;
/// time_unit / fs must be a whole number of milliseconds. Throws
/// std::invalid_argument on a Nyquist violation (fs <= 2 max f).
EvenSeries synth_sines(std::span<const SineComponent> components, double fs, double duration, double noise_sd,
                       std::uint64_t seed, Instant t0 = default_synth_origin(), Duration time_unit = kDay,
                       double offset = 0.0);

/// x(t) = baseline + envelope(t) * profile(t) + N(0, noise_sd^2), t in days.
/// `daily_profile` spans 24 h and `weekly_envelope` 7 d, both sampled evenly
/// and read with periodic linear interpolation. Tables must be at least as
/// fine as fs (>= fs and >= 7 fs entries); days >= 14. Throws
/// std::invalid_argument otherwise.
EvenSeries synth_modulated(std::span<const double> daily_profile, std::span<const double> weekly_envelope,
                           double baseline, double noise_sd, double fs, double days, std::uint64_t seed,
                           Instant t0 = default_synth_origin());

/// `size` samples of offset + amplitude * cos(2 pi cycles i / size + phase).
std::vector<double> periodic_table(std::size_t size, double cycles, double amplitude, double phase_deg = 0.0,
                                   double offset = 0.0);

/// Values of a single-replicate series, in slot order.
std::vector<double> values_of(const EvenSeries& series);

}  // namespace taudit
