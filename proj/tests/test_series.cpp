#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "taudit/error.hpp"
#include "taudit/log_io.hpp"
#include "taudit/series.hpp"
#include "taudit/time.hpp"

using namespace taudit;
using namespace std::chrono_literals;

namespace {

Instant at(const char* s) { return parse_rfc3339(s).utc; }

MeasurementRecord rec(Instant t, int rep, double score, int offset = 0) {
    return MeasurementRecord{Timestamp{t, offset}, rep, score, std::nullopt, {}};
}

}  // namespace

TEST(Time, Rfc3339RoundTrip) {
    const auto ts = parse_rfc3339("2025-08-05T06:00:00+02:00");
    EXPECT_EQ(ts.offset_minutes, 120);
    EXPECT_EQ(format_rfc3339(ts.utc), "2025-08-05T04:00:00Z");
    EXPECT_EQ(format_rfc3339(ts.utc, 120), "2025-08-05T06:00:00+02:00");
    EXPECT_EQ(format_rfc3339(parse_rfc3339("2024-02-29T23:59:59.25Z").utc), "2024-02-29T23:59:59.250Z");
    EXPECT_EQ(parse_utc_offset("-0530"), -330);
    EXPECT_EQ(parse_utc_offset("Z"), 0);
    EXPECT_THROW(parse_rfc3339("2025-13-01T00:00:00Z"), DataError);
    EXPECT_THROW(parse_rfc3339("2025-08-05 06:00"), DataError);
}

TEST(Series, BuildsGridWithGapsAndJitter) {
    const Instant t0 = at("2025-08-04T00:00:00Z");
    std::vector<MeasurementRecord> rs{rec(t0, 1, 0.5), rec(t0, 0, 0.25), rec(t0 + 3h + 5min, 0, 1.0),
                                      rec(t0 + 9h, 0, 0.0)};
    const auto s = build_series(rs, t0, 3h, t0 + 9h);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s.points[0].replicate_scores, (std::vector<double>{0.25, 0.5}));
    EXPECT_TRUE(s.points[2].missing);
    EXPECT_EQ(s.missing_slots(), std::vector<std::size_t>{2});
    EXPECT_DOUBLE_EQ(s.fs(), 8.0);
}

TEST(Series, RejectsBadRecords) {
    const Instant t0 = at("2025-08-04T00:00:00Z");
    std::vector<MeasurementRecord> dup{rec(t0, 0, 0.5), rec(t0, 0, 0.5)};
    EXPECT_THROW(build_series(dup, t0, 3h, t0 + 3h), DataError);
    std::vector<MeasurementRecord> off{rec(t0 + 1h, 0, 0.5)};
    EXPECT_THROW(build_series(off, t0, 3h, t0 + 3h), DataError);
    std::vector<MeasurementRecord> out{rec(t0 + 12h, 0, 0.5)};
    EXPECT_THROW(build_series(out, t0, 3h, t0 + 3h), DataError);
    std::vector<MeasurementRecord> range{rec(t0, 0, 1.5)};
    EXPECT_THROW(build_series(range, t0, 3h, t0 + 3h), DataError);
}

TEST(Series, ImputesRawGrandMean) {
    const Instant t0 = at("2025-08-04T00:00:00Z");
    // Slot means 0.5 and 0.0 average to 0.25; the raw grand mean is 0.2.
    std::vector<MeasurementRecord> rs{rec(t0, 0, 0.0), rec(t0, 1, 1.0), rec(t0, 2, 0.0), rec(t0, 3, 0.0),
                                      rec(t0 + 6h, 0, 0.0)};
    const auto s = impute_missing(build_series(rs, t0, 3h, t0 + 6h));
    EXPECT_TRUE(s.points[1].imputed);
    EXPECT_EQ(s.points[1].replicate_scores, (std::vector<double>{0.2}));
    const auto y = aggregate_replicates(s);
    EXPECT_DOUBLE_EQ(y[0], 0.25);
    EXPECT_DOUBLE_EQ(y[1], 0.2);
    EXPECT_DOUBLE_EQ(y[2], 0.0);
}

TEST(Series, WeekdayHourGridAndMarginals) {
    // Two weeks at 3 h; score = weekday/10 + slot/100 in local time +02:00.
    const Instant t0 = at("2025-08-03T22:00:00Z");  // Monday 00:00 local
    std::vector<MeasurementRecord> rs;
    for (int i = 0; i < 14 * 8; ++i) {
        const int wd = (i / 8) % 7, slot = i % 8;
        rs.push_back(rec(t0 + 3h * i, 0, wd / 10.0 + slot / 100.0, 120));
    }
    const auto s = build_series(rs, t0, 3h, t0 + 3h * (14 * 8 - 1));
    const auto g = weekday_hour_grid(s, 120);
    ASSERT_EQ(g.slots_per_day, 8);
    EXPECT_NEAR(g.cells[2][3].mean, 0.23, 1e-12);
    EXPECT_EQ(g.cells[2][3].count, 2u);
    EXPECT_EQ(g.max_cell().weekday, 6);
    EXPECT_EQ(g.max_cell().slot, 7);
    EXPECT_EQ(g.min_cell().weekday, 0);
    EXPECT_EQ(g.min_cell().slot, 0);
    EXPECT_NEAR(g.weekday_marginal[1].mean, 0.1 + 0.035, 1e-12);
    EXPECT_NEAR(g.hour_marginal[0].mean, 0.3, 1e-12);
    EXPECT_EQ(weekday_name(2), "Wednesday");

    const auto days = daily_means(s, 120);
    ASSERT_EQ(days.size(), 14u);
    EXPECT_EQ(days[0].label, "2025-08-04");
    EXPECT_NEAR(days[0].mean, 0.035, 1e-12);
    const auto weeks = weekly_means(s, 120);
    ASSERT_EQ(weeks.size(), 2u);
    EXPECT_EQ(weeks[1].label, "2025-08-11");
    EXPECT_EQ(weeks[1].count, 56u);
}

TEST(Series, GridNeedsWholeSlotsPerDay) {
    const Instant t0 = at("2025-08-04T00:00:00Z");
    std::vector<MeasurementRecord> rs{rec(t0, 0, 0.5), rec(t0 + 7h, 0, 0.5)};
    EXPECT_THROW(weekday_hour_grid(build_series(rs, t0, 7h, t0 + 7h), 0), DataError);
}

TEST(LogIo, RoundTripAndTruncatedTail) {
    LogLine a;
    a.record = rec(at("2025-08-05T06:00:00+02:00"), 3, 0.75, 120);
    a.record.raw_response = R"({"answer":"B"})";
    a.record.metadata["model"] = "m";
    a.score = 0.75;
    a.latency_ms = 12.5;
    a.attempts = 1;
    LogLine b = a;
    b.status = "parse_failed";
    b.score.reset();
    b.record.replicate_index = 4;

    std::stringstream ss;
    ss << to_jsonl(a) << "\n" << to_jsonl(b) << "\n" << R"({"ts":"2025-08-05T06:00)";
    const auto log = read_measurement_log(ss);
    ASSERT_EQ(log.records.size(), 1u);
    EXPECT_EQ(log.unscored, 1u);
    EXPECT_TRUE(log.truncated_tail);
    EXPECT_EQ(log.records[0].timestamp.offset_minutes, 120);
    EXPECT_EQ(log.records[0].metadata.at("model"), "m");
    EXPECT_DOUBLE_EQ(log.records[0].score, 0.75);

    std::stringstream bad;
    bad << "garbage\n" << to_jsonl(a) << "\n";
    EXPECT_THROW(read_measurement_log(bad), DataError);
}

TEST(LogIo, InfersGridFromTimestamps) {
    const Instant t0 = at("2025-08-04T00:00:00Z");
    std::vector<MeasurementRecord> rs;
    for (int i = 0; i < 10; ++i) {
        if (i != 4) {
            rs.push_back(rec(t0 + 3h * i + std::chrono::seconds(i % 3), 0, 0.5));
        }
    }
    const auto g = infer_grid(rs);
    EXPECT_EQ(g.t0, t0);
    EXPECT_EQ(g.dt, Duration(3h));
    EXPECT_EQ(build_series(rs, g.t0, g.dt, g.t_end).size(), 10u);
}

TEST(Series, GrandMeanEqualsMeanOfSlotMeansForEqualReplicateCounts) {
    const Instant t0 = at("2025-08-04T00:00:00Z");
    std::vector<MeasurementRecord> rs;
    for (int i = 0; i < 5; ++i) {
        for (int r = 0; r < 3; ++r) {
            rs.push_back(rec(t0 + 3h * i, r, ((i * 7 + r * 3) % 5) / 4.0));
        }
    }
    const auto s = build_series(rs, t0, 3h, t0 + 12h);
    const auto y = aggregate_replicates(s);
    double m = 0.0;
    for (double v : y) {
        m += v;
    }
    EXPECT_NEAR(grand_mean(s), m / static_cast<double>(y.size()), 1e-15);
}
