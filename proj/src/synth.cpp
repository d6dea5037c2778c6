#include "taudit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "random.hpp"

namespace taudit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Duration slot_width(double fs, Duration time_unit) {
    if (!(fs > 0.0)) {
        throw std::invalid_argument("sampling rate must be positive");
    }
    const double ms = static_cast<double>(time_unit.count()) / fs;
    const double rounded = std::round(ms);
    if (rounded < 1.0 || std::fabs(ms - rounded) > 1e-6 * ms) {
        throw std::invalid_argument("sampling interval is not a whole number of milliseconds");
    }
    return Duration{static_cast<Duration::rep>(rounded)};
}

std::size_t sample_count(double fs, double duration) {
    if (!(duration > 0.0)) {
        throw std::invalid_argument("duration must be positive");
    }
    return static_cast<std::size_t>(std::floor(duration * fs + 1e-9));
}

// Periodic linear interpolation of an evenly sampled table; `phase` in cycles.
double lookup(std::span<const double> table, double phase) {
    const double n = static_cast<double>(table.size());
    double pos = (phase - std::floor(phase)) * n;
    auto i0 = static_cast<std::size_t>(std::floor(pos));
    double frac = pos - static_cast<double>(i0);
    if (frac < 1e-9) {
        frac = 0.0;
    } else if (frac > 1.0 - 1e-9) {
        frac = 0.0;
        ++i0;
    }
    i0 %= table.size();
    const std::size_t i1 = (i0 + 1) % table.size();
    return table[i0] + frac * (table[i1] - table[i0]);
}

EvenSeries single_replicate_series(Instant t0, Duration dt, std::vector<double> values) {
    EvenSeries s{t0, dt, {}};
    s.points.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        s.points[i].replicate_scores = {values[i]};
    }
    return s;
}

}  // namespace

Instant default_synth_origin() {
    using namespace std::chrono;
    return Instant{sys_days{year{2025} / August / 4}.time_since_epoch()};
}

EvenSeries synth_sines(std::span<const SineComponent> components, double fs, double duration, double noise_sd,
                       std::uint64_t seed, Instant t0, Duration time_unit, double offset) {
    const Duration dt = slot_width(fs, time_unit);
    for (const auto& c : components) {
        if (!(fs > 2.0 * std::fabs(c.freq))) {
            throw std::invalid_argument("component frequency at or above Nyquist");
        }
    }
    if (noise_sd < 0.0) {
        throw std::invalid_argument("noise_sd must be non-negative");
    }
    const std::size_t n = sample_count(fs, duration);
    std::mt19937_64 rng(seed);
    std::vector<double> x(n, offset);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        for (const auto& c : components) {
            x[i] += c.amplitude * std::sin(kTwoPi * c.freq * t + c.phase_deg * std::numbers::pi / 180.0);
        }
        if (noise_sd > 0.0) {
            x[i] += noise_sd * detail::standard_normal(rng);
        }
    }
    return single_replicate_series(t0, dt, std::move(x));
}

EvenSeries synth_modulated(std::span<const double> daily_profile, std::span<const double> weekly_envelope,
                           double baseline, double noise_sd, double fs, double days, std::uint64_t seed, Instant t0) {
    const Duration dt = slot_width(fs, kDay);
    if (static_cast<double>(daily_profile.size()) < fs - 1e-9) {
        throw std::invalid_argument("daily profile table is coarser than the sampling rate");
    }
    if (static_cast<double>(weekly_envelope.size()) < 7.0 * fs - 1e-9) {
        throw std::invalid_argument("weekly envelope table is coarser than the sampling rate");
    }
    if (days < 14.0) {
        throw std::invalid_argument("modulated series must span at least 14 days");
    }
    if (noise_sd < 0.0) {
        throw std::invalid_argument("noise_sd must be non-negative");
    }
    const std::size_t n = sample_count(fs, days);
    std::mt19937_64 rng(seed);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        x[i] = baseline + lookup(weekly_envelope, t / 7.0) * lookup(daily_profile, t);
        if (noise_sd > 0.0) {
            x[i] += noise_sd * detail::standard_normal(rng);
        }
    }
    return single_replicate_series(t0, dt, std::move(x));
}

std::vector<double> periodic_table(std::size_t size, double cycles, double amplitude, double phase_deg,
                                   double offset) {
    std::vector<double> t(size);
    for (std::size_t i = 0; i < size; ++i) {
        t[i] = offset + amplitude * std::cos(kTwoPi * cycles * static_cast<double>(i) / static_cast<double>(size) +
                                             phase_deg * std::numbers::pi / 180.0);
    }
    return t;
}

std::vector<double> values_of(const EvenSeries& series) {
    std::vector<double> v;
    v.reserve(series.size());
    for (const auto& p : series.points) {
        if (p.replicate_scores.size() != 1) {
            throw std::invalid_argument("values_of expects exactly one replicate per slot");
        }
        v.push_back(p.replicate_scores.front());
    }
    return v;
}

}  // namespace taudit
