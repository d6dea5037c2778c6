#pragma once

#include <span>

namespace taudit {

struct DriftResult {
    double slope = 0.0;         // score units per day
    double intercept = 0.0;     // score units at t = 0
    double se_slope_hac = 0.0;  // score units per day
    double t_stat = 0.0;
    double p_value = 1.0;       // two-sided, Student t with N-2 df
    int lag = 0;                // HAC truncation lag in samples
};

/// OLS of y on [1, t] with t in days from the first sample (t_i = i / fs),
/// Newey-West covariance with Bartlett weights 1 - l/(L+1), L = round(lag_days*fs).
/// Throws std::invalid_argument for N < 10, fs <= 0 or lag_days < 0.
DriftResult fit_drift(std::span<const double> y, double fs, double lag_days);

/// Same estimator with an explicit time column (days) and lag in samples.
/// Throws std::invalid_argument when the time column is constant or N <= 2.
DriftResult fit_drift(std::span<const double> y, std::span<const double> t_days, int lag);

}  // namespace taudit
