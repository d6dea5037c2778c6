#include "taudit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "fft.hpp"
#include "random.hpp"
#include "taudit/error.hpp"

namespace taudit {

std::string to_string(Normalization n) {
    return n == Normalization::amplitude ? "amplitude" : "variance";
}

std::string to_string(Detrend d) {
    return d == Detrend::mean ? "mean" : "none";
}

void WelchConfig::validate(std::size_t n) const {
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
        throw std::invalid_argument("overlap fraction must lie in [0, 1)");
    }
    if (nperseg < 8) {
        throw std::invalid_argument("nperseg must be at least 8");
    }
    if (n == 0) {
        throw std::invalid_argument("empty series");
    }
    if (nperseg > n) {
        throw std::invalid_argument("nperseg (" + std::to_string(nperseg) + ") exceeds series length (" +
                                    std::to_string(n) + ")");
    }
}

std::size_t WelchConfig::noverlap() const {
    return static_cast<std::size_t>(std::floor(overlap_fraction * static_cast<double>(nperseg)));
}

namespace {

// Shared machinery for the observed spectrum and every surrogate.
class WelchEstimator {
public:
    WelchEstimator(std::size_t n, const WelchConfig& cfg)
        : cfg_(validated(cfg, n)), fft_(cfg.nperseg), window_(cfg.nperseg) {
        const std::size_t m = cfg.nperseg;
        // periodic Hann
        for (std::size_t i = 0; i < m; ++i) {
            window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m));
        }
        const double sum_w = std::accumulate(window_.begin(), window_.end(), 0.0);
        const double sum_w2 = std::inner_product(window_.begin(), window_.end(), window_.begin(), 0.0);

        const std::size_t hop = cfg.hop();
        for (std::size_t start = 0; start + m <= n; start += hop) {
            starts_.push_back(start);
        }

        double base = 0.0, interior = 0.0;
        if (cfg.normalization == Normalization::amplitude) {
            base = 1.0 / (sum_w * sum_w);
            interior = 4.0;
        } else {
            base = 1.0 / (static_cast<double>(m) * sum_w2);
            interior = 2.0;
        }
        scale_.assign(fft_.bins(), base * interior);
        scale_.front() = base;
        if (m % 2 == 0) {
            scale_.back() = base;
        }
        for (double& s : scale_) {
            s /= static_cast<double>(starts_.size());
        }
    }

    std::size_t bins() const { return fft_.bins(); }
    std::size_t segments() const { return starts_.size(); }

    // power.size() == bins(); scratch buffers are reused across calls.
    void compute(std::span<const double> y, std::span<double> power, std::vector<double>& seg,
                 std::vector<std::complex<double>>& spec) const {
        const std::size_t m = cfg_.nperseg;
        seg.resize(m);
        spec.resize(fft_.bins());
        std::fill(power.begin(), power.end(), 0.0);
        for (std::size_t start : starts_) {
            const auto chunk = y.subspan(start, m);
            double offset = 0.0;
            if (cfg_.detrend == Detrend::mean) {
                offset = std::accumulate(chunk.begin(), chunk.end(), 0.0) / static_cast<double>(m);
            }
            for (std::size_t i = 0; i < m; ++i) {
                seg[i] = (chunk[i] - offset) * window_[i];
            }
            fft_.forward(seg, spec);
            for (std::size_t k = 0; k < spec.size(); ++k) {
                power[k] += std::norm(spec[k]);
            }
        }
        for (std::size_t k = 0; k < power.size(); ++k) {
            power[k] *= scale_[k];
        }
    }

private:
    static const WelchConfig& validated(const WelchConfig& cfg, std::size_t n) {
        cfg.validate(n);
        return cfg;
    }

    WelchConfig cfg_;
    detail::RealFft fft_;
    std::vector<double> window_;
    std::vector<std::size_t> starts_;
    std::vector<double> scale_;
};

}  // namespace

Spectrum welch(std::span<const double> y, double fs, const WelchConfig& cfg) {
    if (!(fs > 0.0)) {
        throw std::invalid_argument("sampling rate must be positive");
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw DataError("series contains non-finite values; impute gaps first");
        }
    }
    const WelchEstimator est(y.size(), cfg);
    Spectrum out;
    out.fs = fs;
    out.nperseg = cfg.nperseg;
    out.df = fs / static_cast<double>(cfg.nperseg);
    out.n_segments = est.segments();
    out.power.resize(est.bins());
    out.freqs.resize(est.bins());
    for (std::size_t k = 0; k < out.freqs.size(); ++k) {
        out.freqs[k] = static_cast<double>(k) * out.df;
    }
    std::vector<double> seg;
    std::vector<std::complex<double>> buf;
    est.compute(y, out.power, seg, buf);
    return out;
}

double nearest_rank_quantile(std::span<double> values, double q) {
    if (values.empty() || !(q > 0.0 && q <= 1.0)) {
        throw std::invalid_argument("nearest_rank_quantile: empty sample or q outside (0, 1]");
    }
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

SignificanceBand permutation_band(std::span<const double> y, double fs, const WelchConfig& cfg, int n_perm,
                                  double alpha, std::uint64_t seed, unsigned threads) {
    if (n_perm < 100) {
        throw std::invalid_argument("n_perm must be at least 100");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (!(fs > 0.0)) {
        throw std::invalid_argument("sampling rate must be positive");
    }
    const WelchEstimator est(y.size(), cfg);
    const std::size_t bins = est.bins();
    const auto perms = static_cast<std::size_t>(n_perm);
    std::vector<double> surrogate_power(perms * bins);  // row-major [perm][bin]

    auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<double> shuffled(y.begin(), y.end());
        std::vector<double> seg;
        std::vector<std::complex<double>> buf;
        for (std::size_t i = begin; i < end; ++i) {
            std::copy(y.begin(), y.end(), shuffled.begin());
            std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(i));
            detail::shuffle(shuffled, rng);
            est.compute(shuffled, std::span<double>(surrogate_power).subspan(i * bins, bins), seg, buf);
        }
    };

    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, perms));
    if (workers <= 1) {
        run_range(0, perms);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (perms + workers - 1) / workers;
        for (std::size_t begin = 0; begin < perms; begin += chunk) {
            pool.emplace_back(run_range, begin, std::min(perms, begin + chunk));
        }
    }

    SignificanceBand band;
    band.n_perm = n_perm;
    band.alpha = alpha;
    band.seed = seed;
    band.threshold.resize(bins);
    std::vector<double> column(perms);
    for (std::size_t k = 0; k < bins; ++k) {
        for (std::size_t i = 0; i < perms; ++i) {
            column[i] = surrogate_power[i * bins + k];
        }
        band.threshold[k] = nearest_rank_quantile(column, 1.0 - alpha);
    }
    return band;
}

std::vector<PeakInfo> detect_peaks(const Spectrum& spec, const SignificanceBand& band, PeakRule rule) {
    if (band.threshold.size() != spec.power.size() || spec.freqs.size() != spec.power.size()) {
        throw DataError("significance band and spectrum are on different frequency grids");
    }
    const auto& p = spec.power;
    const auto& thr = band.threshold;
    const std::size_t n = p.size();
    auto exceeds = [&](std::size_t k) { return k > 0 && k < n && p[k] > thr[k]; };

    std::vector<PeakInfo> peaks;
    auto emit = [&](std::size_t k) {
        peaks.push_back(PeakInfo{spec.freqs[k], p[k], std::sqrt(p[k]), thr[k], k});
    };
    for (std::size_t k = 1; k < n; ++k) {
        if (!exceeds(k)) {
            continue;
        }
        if (rule == PeakRule::all_exceeding) {
            emit(k);
            continue;
        }
        const bool rises = !exceeds(k - 1) || p[k] > p[k - 1];
        const bool falls = !exceeds(k + 1) || p[k] >= p[k + 1];
        if (rises && falls) {
            emit(k);
        }
    }
    return peaks;
}

ExplainedVariance explained_variance(std::span<const PeakInfo> peaks, double variance) {
    if (!(variance > 0.0)) {
        throw std::invalid_argument("variance must be positive");
    }
    double total = 0.0;
    for (const auto& pk : peaks) {
        total += pk.power;
    }
    ExplainedVariance ev;
    ev.raw = total / variance;
    ev.clamped = ev.raw > 1.0;
    ev.fraction = std::min(ev.raw, 1.0);
    return ev;
}

}  // namespace taudit
