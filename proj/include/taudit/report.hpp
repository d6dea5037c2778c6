#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "taudit/analysis.hpp"

namespace taudit {

inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kSpectrumFile = "spectrum.csv";

/// Report as JSON. Key order is fixed and numbers print with round-trip
/// precision, so equal reports serialize to equal bytes.
nlohmann::ordered_json report_to_json(const AuditReport& report);

/// Writes report.json plus CSV sidecars (spectrum, peaks, slot means,
/// daily/weekly means, weekday x hour grid) into `dir`, creating it.
void write_report(const AuditReport& report, const std::filesystem::path& dir);

/// Loads a report.json written by write_report. Throws DataError.
nlohmann::ordered_json load_report(const std::filesystem::path& path);

/// Human-readable tables for `report --format text`.
void render_text(const nlohmann::ordered_json& report, std::ostream& out);
/// Peak table plus key scalars as CSV for `report --format csv`.
void render_csv(const nlohmann::ordered_json& report, std::ostream& out);

std::string to_string(PeakRule rule);

}  // namespace taudit
