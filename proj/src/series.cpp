#include "taudit/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "taudit/error.hpp"
#include "taudit/stats.hpp"

namespace taudit {

std::size_t EvenSeries::missing_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const TimePoint& p) { return p.missing; }));
}

std::vector<std::size_t> EvenSeries::missing_slots() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].missing) {
            out.push_back(i);
        }
    }
    return out;
}

EvenSeries build_series(std::span<const MeasurementRecord> records, Instant t0, Duration dt, Instant t_end) {
    if (dt <= Duration::zero()) {
        throw DataError("sampling interval must be positive");
    }
    if (t_end < t0) {
        throw DataError("series window ends before it starts");
    }
    const Duration tol = dt / 10;
    const auto n_slots = static_cast<std::size_t>((t_end - t0 + tol) / dt) + 1;

    // slot -> (replicate index, score)
    std::vector<std::vector<std::pair<int, double>>> bins(n_slots);
    for (const auto& rec : records) {
        const Instant ts = rec.timestamp.utc;
        if (!(rec.score >= 0.0 && rec.score <= 1.0)) {
            throw DataError("score outside [0,1] at " + format_rfc3339(ts, rec.timestamp.offset_minutes));
        }
        if (ts < t0 - tol || ts > t_end + tol) {
            throw DataError("timestamp outside series window: " + format_rfc3339(ts, rec.timestamp.offset_minutes));
        }
        const auto offset = (ts - t0).count();
        const auto step = dt.count();
        // round to nearest slot, half away from zero
        const long long slot = offset >= 0 ? (offset + step / 2) / step : -((-offset + step / 2) / step);
        const Duration residual{offset - slot * step};
        if (std::chrono::abs(residual) > tol || slot < 0 || static_cast<std::size_t>(slot) >= n_slots) {
            throw DataError("off-grid timestamp: " + format_rfc3339(ts, rec.timestamp.offset_minutes));
        }
        auto& bin = bins[static_cast<std::size_t>(slot)];
        for (const auto& [rep, _] : bin) {
            if (rep == rec.replicate_index) {
                throw DataError("duplicate replicate " + std::to_string(rep) + " at slot " + std::to_string(slot));
            }
        }
        bin.emplace_back(rec.replicate_index, rec.score);
    }

    EvenSeries series{t0, dt, {}};
    series.points.resize(n_slots);
    for (std::size_t i = 0; i < n_slots; ++i) {
        auto& bin = bins[i];
        std::sort(bin.begin(), bin.end());
        auto& pt = series.points[i];
        pt.replicate_scores.reserve(bin.size());
        for (const auto& [_, score] : bin) {
            pt.replicate_scores.push_back(score);
        }
        pt.missing = bin.empty();
    }
    return series;
}

double grand_mean(const EvenSeries& series) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : series.points) {
        if (p.missing) {
            continue;
        }
        for (double s : p.replicate_scores) {
            sum += s;
            ++n;
        }
    }
    if (n == 0) {
        throw DataError("series has no observed scores");
    }
    return sum / static_cast<double>(n);
}

EvenSeries impute_missing(const EvenSeries& series) {
    const double fill = grand_mean(series);
    EvenSeries out = series;
    for (auto& p : out.points) {
        if (p.missing) {
            p.replicate_scores.assign(1, fill);
            p.imputed = true;
        }
    }
    return out;
}

std::vector<double> aggregate_replicates(const EvenSeries& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& p = series.points[i];
        if (p.replicate_scores.empty()) {
            throw DataError("slot " + std::to_string(i) + " has no scores; impute before aggregating");
        }
        out.push_back(stats::mean(p.replicate_scores));
    }
    return out;
}

namespace {

using std::chrono::days;
using std::chrono::floor;
using std::chrono::minutes;
using std::chrono::sys_days;

sys_days local_day(Instant t, int tz_offset_minutes) {
    return floor<days>(t + minutes{tz_offset_minutes});
}

// Monday = 0
int iso_weekday(sys_days d) {
    return static_cast<int>(std::chrono::weekday{d}.iso_encoding()) - 1;
}

std::string date_label(sys_days d) {
    return format_rfc3339(Instant{d.time_since_epoch()}).substr(0, 10);
}

template <typename KeyFn>
std::vector<CalendarMean> calendar_means(const EvenSeries& series, int tz_offset_minutes, KeyFn key_of) {
    std::map<sys_days, std::vector<double>> groups;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& scores = series.points[i].replicate_scores;
        if (scores.empty()) {
            continue;
        }
        auto& g = groups[key_of(local_day(series.time_at(i), tz_offset_minutes))];
        g.insert(g.end(), scores.begin(), scores.end());
    }
    std::vector<CalendarMean> out;
    out.reserve(groups.size());
    for (const auto& [day, values] : groups) {
        out.push_back(CalendarMean{date_label(day), Instant{day.time_since_epoch()} - minutes{tz_offset_minutes},
                                   stats::mean(values), stats::sample_sd(values), values.size()});
    }
    return out;
}

}  // namespace

std::vector<CalendarMean> daily_means(const EvenSeries& series, int tz_offset_minutes) {
    return calendar_means(series, tz_offset_minutes, [](sys_days d) { return d; });
}

std::vector<CalendarMean> weekly_means(const EvenSeries& series, int tz_offset_minutes) {
    return calendar_means(series, tz_offset_minutes, [](sys_days d) { return d - days{iso_weekday(d)}; });
}

WeekdayHourGrid weekday_hour_grid(const EvenSeries& series, int tz_offset_minutes) {
    if (series.dt <= Duration::zero() || kDay % series.dt != Duration::zero()) {
        throw DataError("sampling interval does not divide a day into an integer number of slots");
    }
    const int slots = static_cast<int>(kDay / series.dt);

    std::array<std::vector<double>, 7> row_sum, row_cnt;  // indexed [weekday][slot]
    for (auto& r : row_sum) r.assign(slots, 0.0);
    for (auto& r : row_cnt) r.assign(slots, 0.0);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& scores = series.points[i].replicate_scores;
        if (scores.empty()) {
            continue;
        }
        const Instant local = series.time_at(i) + minutes{tz_offset_minutes};
        const sys_days day = floor<days>(local);
        const int wd = iso_weekday(day);
        const int slot = static_cast<int>((local - day) / series.dt);
        for (double s : scores) {
            row_sum[wd][slot] += s;
            row_cnt[wd][slot] += 1.0;
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto make_cell = [nan](double sum, double cnt) {
        return GridCell{cnt > 0 ? sum / cnt : nan, static_cast<std::size_t>(cnt)};
    };

    WeekdayHourGrid grid;
    grid.slots_per_day = slots;
    grid.timezone_offset = tz_offset_minutes;
    grid.slot_width = series.dt;
    grid.cells.assign(7, std::vector<GridCell>(slots));
    grid.weekday_marginal.resize(7);
    grid.hour_marginal.resize(slots);
    std::vector<double> col_sum(slots, 0.0), col_cnt(slots, 0.0);
    for (int d = 0; d < 7; ++d) {
        double rs = 0.0, rc = 0.0;
        for (int h = 0; h < slots; ++h) {
            grid.cells[d][h] = make_cell(row_sum[d][h], row_cnt[d][h]);
            rs += row_sum[d][h];
            rc += row_cnt[d][h];
            col_sum[h] += row_sum[d][h];
            col_cnt[h] += row_cnt[d][h];
        }
        grid.weekday_marginal[d] = make_cell(rs, rc);
    }
    for (int h = 0; h < slots; ++h) {
        grid.hour_marginal[h] = make_cell(col_sum[h], col_cnt[h]);
    }
    return grid;
}

namespace {

template <typename Better>
WeekdayHourGrid::Extremum find_extremum(const WeekdayHourGrid& g, Better better) {
    WeekdayHourGrid::Extremum best{-1, -1, 0.0};
    for (int d = 0; d < static_cast<int>(g.cells.size()); ++d) {
        for (int h = 0; h < g.slots_per_day; ++h) {
            const auto& c = g.cells[d][h];
            if (c.count == 0) {
                continue;
            }
            if (best.weekday < 0 || better(c.mean, best.mean)) {
                best = {d, h, c.mean};
            }
        }
    }
    if (best.weekday < 0) {
        throw DataError("weekday/hour grid is empty");
    }
    return best;
}

}  // namespace

WeekdayHourGrid::Extremum WeekdayHourGrid::max_cell() const {
    return find_extremum(*this, std::greater<>{});
}

WeekdayHourGrid::Extremum WeekdayHourGrid::min_cell() const {
    return find_extremum(*this, std::less<>{});
}

std::string weekday_name(int monday_based) {
    static constexpr std::array<const char*, 7> names{"Monday", "Tuesday", "Wednesday", "Thursday",
                                                      "Friday", "Saturday", "Sunday"};
    return names.at(static_cast<std::size_t>(monday_based));
}

}  // namespace taudit
