#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taudit/drift.hpp"
#include "taudit/log_io.hpp"
#include "taudit/modulation.hpp"
#include "taudit/phase.hpp"
#include "taudit/series.hpp"
#include "taudit/spectral.hpp"

namespace taudit {

/// Every knob of the audit pipeline; echoed verbatim into the report.
struct AnalysisConfig {
    int nperseg_div = 4;  // nperseg = floor(N / nperseg_div)
    double overlap = 0.5;
    int n_perm = 1000;
    double alpha = 0.05;
    double hac_days = 7.0;
    std::uint64_t seed = 20250805;
    int tz_offset_minutes = 0;
    Normalization normalization = Normalization::amplitude;
    Detrend detrend = Detrend::mean;
    PeakRule peak_rule = PeakRule::run_local_maxima;
    ModulationModel model{};
    double classify_tolerance = 0.0;  // cycles/day; 0 = spectrum df
    double horizon_days = kDefaultHorizonDays;
    double resolution_per_day = kDefaultResolutionPerDay;
    std::optional<GridSpec> grid;  // overrides log metadata / inference
    unsigned threads = 0;          // surrogate workers; does not affect results
};

struct SeriesSummary {
    std::size_t n = 0;
    double fs = 0.0;  // per day
    Duration dt{};
    Instant t0{};
    Instant t_end{};
    std::size_t n_measurements = 0;
    std::size_t unscored_lines = 0;
    double mean = 0.0;    // grand mean of raw scores
    double sd_raw = 0.0;  // over raw scores
    double sd_avg = 0.0;  // over per-slot means after imputation
    std::vector<std::size_t> gap_slots;
};

struct PeakReport {
    PeakInfo peak;
    PeakClassification classification;
    PhaseFit fit;
};

struct AuditReport {
    SeriesSummary summary;
    std::vector<double> slot_means;
    DriftResult drift;
    Spectrum spectrum;
    SignificanceBand band;
    std::vector<PeakReport> peaks;
    ExplainedVariance explained;
    std::optional<double> reconstruction_peak_to_peak;
    std::optional<WeekdayHourGrid> grid;  // absent for sub-minute sampling
    std::vector<CalendarMean> daily;
    std::vector<CalendarMean> weekly;
    AnalysisConfig config;
};

/// Full pipeline on an already gridded series (gaps allowed):
/// impute -> slot means -> drift -> Welch -> permutation band -> peaks ->
/// classification -> phase fits -> reconstruction -> explained variance -> grids.
AuditReport analyze_series(const EvenSeries& observed, const AnalysisConfig& cfg);

/// Grid from cfg.grid, else from `grid_*` record metadata, else inferred.
GridSpec resolve_grid(std::span<const MeasurementRecord> records, const AnalysisConfig& cfg);

/// Reads the log, grids it and runs analyze_series. Throws DataError for an
/// empty log.
AuditReport analyze_log(const std::filesystem::path& log_path, const AnalysisConfig& cfg);

/// "7.3 d" for periods of two days or more, otherwise "21.0 h".
std::string period_label(double freq_per_day);

}  // namespace taudit
