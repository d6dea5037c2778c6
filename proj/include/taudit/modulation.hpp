#pragma once

#include <span>
#include <string>
#include <vector>

#include "taudit/rational.hpp"
#include "taudit/spectral.hpp"

namespace taudit {

/// Multiplicative daily x weekly model: lines at k*f_d +/- m*f_w (cycles/day).
struct ModulationModel {
    Rational f_d{1};
    Rational f_w{1, 7};
    int k_max = 3;
    int m_max = 1;

    /// Throws std::invalid_argument unless f_d > f_w > 0, k_max >= 1, m_max >= 0.
    void validate() const;
};

struct PredictedLine {
    int k = 0;
    int m = 0;
    int sign = +1;   // +1 or -1; +1 whenever m == 0
    Rational freq;   // exact, cycles/day

    double freq_per_day() const { return freq.to_double(); }
    /// Exact period in hours.
    Rational period_hours() const { return Rational(24) / freq; }
};

/// All distinct positive k*f_d + sign*m*f_w for 0<=k<=k_max, 0<=m<=m_max,
/// (k,m) != (0,0), sorted by frequency. Coinciding lines keep the smallest
/// (k+m), then smallest k.
std::vector<PredictedLine> predict_frequencies(const ModulationModel& model);

enum class LineKind {
    weekly_fundamental,  // k = 0, m = 1
    weekly_harmonic,     // k = 0, m > 1
    daily_fundamental,   // k = 1, m = 0
    daily_harmonic,      // k > 1, m = 0
    sideband,            // k >= 1, m >= 1
    unexplained,
};

std::string to_string(LineKind kind);
LineKind kind_of(const PredictedLine& line);

struct PeakClassification {
    PeakInfo peak;
    LineKind label = LineKind::unexplained;
    PredictedLine line;           // meaningful unless unexplained
    double predicted_freq = 0.0;  // cycles/day; nearest prediction even when unexplained
    double deviation = 0.0;       // peak.freq - predicted_freq

    /// e.g. "sideband(k=1,m=1,+)"
    std::string label_text() const;
};

/// Nearest predicted line within `tolerance` (cycles/day); ties go to smaller
/// (k+m), then smaller k. Throws std::invalid_argument for tolerance <= 0.
std::vector<PeakClassification> classify_peaks(std::span<const PeakInfo> peaks, const ModulationModel& model,
                                               double tolerance);

}  // namespace taudit
