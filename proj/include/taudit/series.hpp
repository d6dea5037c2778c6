#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taudit/time.hpp"

namespace taudit {

/// One scored probe response. `score` lies in [0,1].
struct MeasurementRecord {
    Timestamp timestamp;
    int replicate_index = 0;
    double score = 0.0;
    std::optional<std::string> raw_response;
    std::map<std::string, std::string> metadata;
};

struct TimePoint {
    std::vector<double> replicate_scores;  // ordered by replicate index
    bool missing = false;
    bool imputed = false;

    bool observed() const { return !replicate_scores.empty(); }
};

/// Evenly sampled series: points[i] sits at t0 + i*dt exactly.
struct EvenSeries {
    Instant t0{};
    Duration dt{};
    std::vector<TimePoint> points;

    std::size_t size() const { return points.size(); }
    /// Samples per day.
    double fs() const { return static_cast<double>(kDay.count()) / static_cast<double>(dt.count()); }
    Instant time_at(std::size_t i) const { return t0 + dt * static_cast<Duration::rep>(i); }
    std::size_t missing_count() const;
    std::vector<std::size_t> missing_slots() const;
};

/// Aligns records onto the grid t0 + i*dt, i = 0..floor((t_end - t0)/dt).
/// Timestamps may jitter by up to dt/10 around their slot. Throws DataError on
/// duplicate (slot, replicate), out-of-window or off-grid timestamps and on
/// scores outside [0,1].
EvenSeries build_series(std::span<const MeasurementRecord> records, Instant t0, Duration dt, Instant t_end);

/// Fills every missing slot with one synthetic replicate equal to the grand
/// mean of all observed replicate scores. Throws DataError if nothing is observed.
EvenSeries impute_missing(const EvenSeries& series);

/// Mean of all observed replicate scores.
double grand_mean(const EvenSeries& series);

/// Per-slot replicate means. Throws DataError on a slot without scores.
std::vector<double> aggregate_replicates(const EvenSeries& series);

struct CalendarMean {
    std::string label;  // local date (YYYY-MM-DD); for weeks, the Monday
    Instant start{};    // local midnight as UTC instant
    double mean = 0.0;
    double sd = 0.0;
    std::size_t count = 0;
};

/// Count-weighted means over all replicate scores per local calendar day.
std::vector<CalendarMean> daily_means(const EvenSeries& series, int tz_offset_minutes);
/// Same, over Monday-Sunday weeks.
std::vector<CalendarMean> weekly_means(const EvenSeries& series, int tz_offset_minutes);

struct GridCell {
    double mean = 0.0;  // NaN when count == 0
    std::size_t count = 0;
};

/// Weekday (rows, Monday = 0) by time-of-day slot (columns) means in local time.
struct WeekdayHourGrid {
    int slots_per_day = 0;
    int timezone_offset = 0;  // minutes
    Duration slot_width{};
    std::vector<std::vector<GridCell>> cells;  // [7][slots_per_day]
    std::vector<GridCell> weekday_marginal;    // [7]
    std::vector<GridCell> hour_marginal;       // [slots_per_day]

    struct Extremum {
        int weekday = 0;
        int slot = 0;
        double mean = 0.0;
    };
    Extremum max_cell() const;
    Extremum min_cell() const;
};

/// Throws DataError when a day does not hold an integer number of slots.
WeekdayHourGrid weekday_hour_grid(const EvenSeries& series, int tz_offset_minutes);

std::string weekday_name(int monday_based);

}  // namespace taudit
