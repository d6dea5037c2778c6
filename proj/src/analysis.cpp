#include "taudit/analysis.hpp"

#include <cmath>
#include <cstdio>

#include "taudit/error.hpp"
#include "taudit/stats.hpp"

namespace taudit {
namespace {

constexpr double kMaxReconstructionSamples = 5e7;
constexpr std::size_t kMaxGridSlotsPerDay = 1440;

}  // namespace

std::string period_label(double freq_per_day) {
    const double hours = 24.0 / freq_per_day;
    char buf[32];
    if (hours >= 48.0) {
        std::snprintf(buf, sizeof buf, "%.1f d", hours / 24.0);
    } else {
        std::snprintf(buf, sizeof buf, "%.1f h", hours);
    }
    return buf;
}

AuditReport analyze_series(const EvenSeries& observed, const AnalysisConfig& cfg) {
    if (observed.size() == 0) {
        throw DataError("empty series");
    }
    if (cfg.nperseg_div < 1) {
        throw std::invalid_argument("nperseg divisor must be >= 1");
    }
    AuditReport rep;
    rep.config = cfg;

    auto& s = rep.summary;
    s.n = observed.size();
    s.fs = observed.fs();
    s.dt = observed.dt;
    s.t0 = observed.t0;
    s.t_end = observed.time_at(observed.size() - 1);
    s.gap_slots = observed.missing_slots();
    std::vector<double> raw;
    for (const auto& p : observed.points) {
        raw.insert(raw.end(), p.replicate_scores.begin(), p.replicate_scores.end());
    }
    if (raw.empty()) {
        throw DataError("series has no observed scores");
    }
    s.n_measurements = raw.size();
    s.mean = stats::mean(raw);
    s.sd_raw = stats::sample_sd(raw);

    const EvenSeries filled = impute_missing(observed);
    rep.slot_means = aggregate_replicates(filled);
    const auto& y = rep.slot_means;
    s.sd_avg = stats::sample_sd(y);

    rep.drift = fit_drift(y, s.fs, cfg.hac_days);

    WelchConfig wc;
    wc.nperseg = y.size() / static_cast<std::size_t>(cfg.nperseg_div);
    wc.overlap_fraction = cfg.overlap;
    wc.normalization = cfg.normalization;
    wc.detrend = cfg.detrend;
    rep.spectrum = welch(y, s.fs, wc);
    rep.band = permutation_band(y, s.fs, wc, cfg.n_perm, cfg.alpha, cfg.seed, cfg.threads);

    const auto peaks = detect_peaks(rep.spectrum, rep.band, cfg.peak_rule);
    const double tol = cfg.classify_tolerance > 0.0 ? cfg.classify_tolerance : rep.spectrum.df;
    const auto classes = classify_peaks(peaks, cfg.model, tol);
    std::vector<Component> components;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const PhaseFit fit = fit_phase(y, s.fs, peaks[i].freq);
        rep.peaks.push_back(PeakReport{peaks[i], classes[i], fit});
        components.push_back(Component{peaks[i].freq, peaks[i].amplitude, fit.phase_deg});
    }

    if (!components.empty()) {
        double f_min = components.front().freq, f_max = f_min;
        for (const auto& c : components) {
            f_min = std::min(f_min, c.freq);
            f_max = std::max(f_max, c.freq);
        }
        const double resolution = std::max(cfg.resolution_per_day, 4.0 * f_max);
        const double horizon = std::max(cfg.horizon_days, 10.0 / f_min);
        if (horizon * resolution <= kMaxReconstructionSamples) {
            rep.reconstruction_peak_to_peak = reconstruct(components, horizon, resolution).peak_to_peak;
        }
    } else {
        rep.reconstruction_peak_to_peak = 0.0;
    }

    const double variance = s.sd_avg * s.sd_avg;
    if (variance > 0.0) {
        rep.explained = explained_variance(peaks, variance);
    }

    if (kDay % observed.dt == Duration::zero() &&
        static_cast<std::size_t>(kDay / observed.dt) <= kMaxGridSlotsPerDay) {
        rep.grid = weekday_hour_grid(observed, cfg.tz_offset_minutes);
    }
    rep.daily = daily_means(observed, cfg.tz_offset_minutes);
    rep.weekly = weekly_means(observed, cfg.tz_offset_minutes);
    return rep;
}

GridSpec resolve_grid(std::span<const MeasurementRecord> records, const AnalysisConfig& cfg) {
    if (cfg.grid) {
        return *cfg.grid;
    }
    for (const auto& r : records) {
        const auto& m = r.metadata;
        auto t0 = m.find("grid_t0"), dt = m.find("grid_dt_ms"), te = m.find("grid_t_end");
        if (t0 != m.end() && dt != m.end() && te != m.end()) {
            try {
                return GridSpec{parse_rfc3339(t0->second).utc, Duration{std::stoll(dt->second)},
                                parse_rfc3339(te->second).utc};
            } catch (const std::logic_error&) {
                throw DataError("malformed grid metadata in log");
            }
        }
    }
    return infer_grid(records);
}

AuditReport analyze_log(const std::filesystem::path& log_path, const AnalysisConfig& cfg) {
    const LogContents log = read_measurement_log(log_path);
    if (log.records.empty()) {
        throw DataError("log " + log_path.string() + " holds no scored records");
    }
    const GridSpec grid = resolve_grid(log.records, cfg);
    const EvenSeries series = build_series(log.records, grid.t0, grid.dt, grid.t_end);
    AuditReport rep = analyze_series(series, cfg);
    rep.summary.unscored_lines = log.unscored;
    return rep;
}

}  // namespace taudit
