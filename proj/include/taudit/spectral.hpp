#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace taudit {

enum class Window { hann };
enum class Normalization { amplitude, variance };
enum class Detrend { none, mean };

std::string to_string(Normalization n);
std::string to_string(Detrend d);

/// Welch estimator parameters.
///
/// `amplitude` normalization puts a full-length, on-bin sinusoid of amplitude A
/// at peak power A^2. `variance` normalization makes the one-sided powers sum
/// to the (windowed) variance of the input.
struct WelchConfig {
    std::size_t nperseg = 0;
    double overlap_fraction = 0.5;
    Window window = Window::hann;
    Normalization normalization = Normalization::amplitude;
    Detrend detrend = Detrend::mean;

    /// Throws std::invalid_argument unless 0 <= overlap < 1, 8 <= nperseg <= n.
    void validate(std::size_t n) const;
    std::size_t noverlap() const;
    std::size_t hop() const { return nperseg - noverlap(); }
};

/// One-sided spectrum; bin 0 is DC, bin k sits at k * fs / nperseg.
struct Spectrum {
    std::vector<double> freqs;
    std::vector<double> power;
    double df = 0.0;
    double fs = 0.0;
    std::size_t n_segments = 0;
    std::size_t nperseg = 0;
};

/// Per-bin (1 - alpha) quantiles of surrogate spectra.
struct SignificanceBand {
    std::vector<double> threshold;
    int n_perm = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
};

struct PeakInfo {
    double freq = 0.0;       // cycles per unit of fs (cycles/day for score series)
    double power = 0.0;
    double amplitude = 0.0;  // sqrt(power)
    double threshold = 0.0;
    std::size_t bin_index = 0;

    double period() const { return 1.0 / freq; }
};

/// Welch PSD of a gap-free series sampled at fs.
Spectrum welch(std::span<const double> y, double fs, const WelchConfig& cfg);

/// Spectra of n_perm random permutations of y (surrogate i seeded with
/// seed ^ i), reduced to a per-bin nearest-rank (1 - alpha) quantile.
/// Results do not depend on `threads` (0 = hardware concurrency).
SignificanceBand permutation_band(std::span<const double> y, double fs, const WelchConfig& cfg, int n_perm,
                                  double alpha, std::uint64_t seed, unsigned threads = 0);

enum class PeakRule {
    run_local_maxima,  // local maxima within each contiguous run of exceeding bins
    all_exceeding,     // every bin above its threshold
};

/// Bins above threshold (DC excluded), reduced per `rule`. Throws DataError
/// when the band and spectrum grids differ.
std::vector<PeakInfo> detect_peaks(const Spectrum& spec, const SignificanceBand& band,
                                   PeakRule rule = PeakRule::run_local_maxima);

struct ExplainedVariance {
    double fraction = 0.0;  // clamped to [0, 1]
    double raw = 0.0;       // unclamped ratio
    bool clamped = false;
};

/// Sum of peak powers over the series variance. Throws std::invalid_argument
/// for non-positive variance.
ExplainedVariance explained_variance(std::span<const PeakInfo> peaks, double variance);

/// Nearest-rank quantile of an unsorted sample, q in (0, 1]. Reorders `values`.
double nearest_rank_quantile(std::span<double> values, double q);

}  // namespace taudit
