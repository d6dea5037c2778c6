#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "taudit/series.hpp"

namespace taudit {

/// Synthetic log recipe for `simulate`. Two kinds:
///
///   {"kind": "sines", "fs": 8, "duration": 87.75, "time_unit_seconds": 86400,
///    "components": [{"amplitude": .., "freq": .., "phase_deg": ..}], ...}
///   {"kind": "modulated", "fs": 8, "days": 87.75,
///    "daily_profile": [..] | {"size": 96, "cycles": 1, "amplitude": 1, "phase_deg": 0},
///    "weekly_envelope": [..] | {...}, ...}
///
/// Shared optional keys: t0 (RFC 3339), noise_sd, seed, offset/baseline, and
/// scale, applied as score = baseline + scale * signal.
struct Scenario {
    std::string kind;
    EvenSeries series;  // already scaled and offset
};

/// Throws DataError on malformed JSON or a missing field, and
/// std::invalid_argument on parameters the generators reject.
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// One record per observed slot, each carrying grid_* metadata so analysis
/// needs no grid inference. Throws DataError if any score leaves [0, 1].
std::vector<MeasurementRecord> scenario_records(const Scenario& scenario);

}  // namespace taudit
