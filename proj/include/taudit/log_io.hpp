#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taudit/series.hpp"

namespace taudit {

/// One line of the JSONL measurement log. Lines written by the probe carry
/// status/latency/attempts; analysis keeps only `scored` lines.
struct LogLine {
    MeasurementRecord record;
    std::string status = "scored";  // scored | parse_failed | transport_failed
    std::optional<double> score;    // present iff status == scored
    std::optional<double> latency_ms;
    std::optional<int> attempts;
};

std::string to_jsonl(const LogLine& line);
/// Throws DataError on malformed content.
LogLine parse_log_line(const std::string& text);

struct LogContents {
    std::vector<MeasurementRecord> records;  // scored lines only
    std::size_t lines = 0;
    std::size_t unscored = 0;      // parse_failed / transport_failed lines
    bool truncated_tail = false;   // final line incomplete (crash mid-write)
};

/// Reads a JSONL log. An unparseable final line without a trailing newline
/// is reported as a truncated tail; any other bad line throws DataError.
LogContents read_measurement_log(const std::filesystem::path& path);
LogContents read_measurement_log(std::istream& in);

void write_measurement_log(const std::filesystem::path& path, std::span<const MeasurementRecord> records);

/// CSV export with header `ts,rep,score`.
void write_measurements_csv(std::ostream& out, std::span<const MeasurementRecord> records);

struct GridSpec {
    Instant t0{};
    Duration dt{};
    Instant t_end{};
};

/// First/last timestamp and the most common spacing between distinct
/// consecutive timestamps (rounded to the minute). Throws DataError if fewer
/// than two distinct timestamps exist.
GridSpec infer_grid(std::span<const MeasurementRecord> records);

}  // namespace taudit
