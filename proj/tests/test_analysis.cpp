#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taudit/analysis.hpp"
#include "taudit/error.hpp"
#include "taudit/report.hpp"
#include "taudit/scenario.hpp"
#include "taudit/synth.hpp"

using namespace taudit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "taudit_analysis_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& log = {}) {
    std::string cmd = std::string("env -u TEMPORAL_AUDIT_API_KEY ") + TAUDIT_CLI + " " + args;
    if (!log.empty()) {
        cmd += " > " + log.string() + " 2>&1";
    } else {
        cmd += " > /dev/null 2>&1";
    }
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kModulated = R"({"kind":"modulated","fs":8,"days":87.75,"seed":7,"noise_sd":0.02,"baseline":0.5,
  "daily_profile":{"size":96,"cycles":1,"amplitude":1},
  "weekly_envelope":{"size":672,"cycles":1,"amplitude":0.1}})";

}  // namespace

TEST(Analysis, ConstantSeriesHasNoDriftAndNoPeaks) {
    const auto s = synth_sines(std::vector<SineComponent>{}, 8.0, 87.75, 0.0, 1, default_synth_origin(), kDay, 0.6);
    AnalysisConfig cfg;
    cfg.n_perm = 200;
    const auto r = analyze_series(s, cfg);
    EXPECT_EQ(r.drift.slope, 0.0);
    EXPECT_EQ(r.drift.p_value, 1.0);
    EXPECT_TRUE(r.peaks.empty());
    EXPECT_EQ(r.explained.fraction, 0.0);
    EXPECT_EQ(r.summary.n, 702u);
    EXPECT_NEAR(r.summary.mean, 0.6, 1e-12);
}

TEST(Analysis, SuppressedCarrierRoundTripsThroughLog) {
    const auto dir = scratch("roundtrip");
    const auto records = scenario_records(scenario_from_json(kModulated));
    write_measurement_log(dir / "log.jsonl", records);
    const auto r = analyze_log(dir / "log.jsonl", AnalysisConfig{});
    ASSERT_EQ(r.summary.n, 702u);
    bool p21 = false, p28 = false, p24 = false;
    for (const auto& p : r.peaks) {
        const double hours = 24.0 / p.peak.freq;
        const double bin_hours = 24.0 / (p.peak.freq - r.spectrum.df) - hours;
        p21 |= std::abs(hours - 21.0) < bin_hours;
        p28 |= std::abs(hours - 28.0) < bin_hours;
        p24 |= p.peak.bin_index == 22;
    }
    EXPECT_TRUE(p21);
    EXPECT_TRUE(p28);
    EXPECT_FALSE(p24);
    ASSERT_TRUE(r.grid.has_value());
    EXPECT_EQ(r.grid->slots_per_day, 8);
}

TEST(Analysis, GapsAreImputedAndReported) {
    const auto dir = scratch("gaps");
    auto records = scenario_records(scenario_from_json(kModulated));
    records.erase(records.begin() + 100, records.begin() + 110);
    write_measurement_log(dir / "log.jsonl", records);
    const auto r = analyze_log(dir / "log.jsonl", AnalysisConfig{});
    EXPECT_EQ(r.summary.n, 702u);
    EXPECT_EQ(r.summary.gap_slots.size(), 10u);
    EXPECT_EQ(r.summary.gap_slots.front(), 100u);
}

TEST(Analysis, EmptyLogIsDataError) {
    const auto dir = scratch("empty");
    std::ofstream(dir / "log.jsonl").close();
    EXPECT_THROW(analyze_log(dir / "log.jsonl", AnalysisConfig{}), DataError);
}

TEST(Analysis, PeriodLabels) {
    EXPECT_EQ(period_label(1.0 / 7.0), "7.0 d");
    EXPECT_EQ(period_label(8.0 / 7.0), "21.0 h");
    EXPECT_EQ(period_label(1.0), "24.0 h");
}

TEST(Report, JsonCarriesConfigEcho) {
    const auto r = analyze_series(scenario_from_json(kModulated).series, AnalysisConfig{});
    const auto j = report_to_json(r);
    EXPECT_EQ(j.at("config_echo").at("n_perm"), 1000);
    EXPECT_EQ(j.at("config_echo").at("seed"), AnalysisConfig{}.seed);
    EXPECT_EQ(j.at("config_echo").at("nperseg_div"), 4);
    EXPECT_EQ(j.at("drift").at("lag_samples"), 56);
    EXPECT_EQ(j.at("spectrum").at("nperseg"), 175);
    EXPECT_EQ(j.at("spectrum_file"), "spectrum.csv");
    std::ostringstream text, csv;
    render_text(j, text);
    render_csv(j, csv);
    EXPECT_NE(text.str().find("sideband(k=1,m=1,+)"), std::string::npos);
    EXPECT_EQ(csv.str().rfind("period,", 0), 0u);
}

TEST(Cli, SimulateAnalyzeReportAndDeterminism) {
    const auto dir = scratch("cli");
    std::ofstream(dir / "scenario.json") << kModulated;
    ASSERT_EQ(run_cli("simulate --scenario " + (dir / "scenario.json").string() + " --out " +
                      (dir / "log.jsonl").string()),
              0);
    const std::string analyze = "analyze --log " + (dir / "log.jsonl").string() + " --seed 11 --tz-offset +02:00";
    ASSERT_EQ(run_cli(analyze + " --out " + (dir / "a").string()), 0);
    ASSERT_EQ(run_cli(analyze + " --threads 3 --out " + (dir / "b").string()), 0);
    EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
    for (const char* f : {"spectrum.csv", "peaks.csv", "slot_means.csv", "daily_means.csv", "weekly_means.csv",
                          "weekday_hour.csv", "measurements.csv"}) {
        EXPECT_TRUE(fs::exists(dir / "a" / f)) << f;
    }
    EXPECT_EQ(run_cli("report --in " + (dir / "a" / "report.json").string() + " --format text", dir / "text.txt"), 0);
    EXPECT_NE(slurp(dir / "text.txt").find("(+02:00)"), std::string::npos);
    EXPECT_EQ(run_cli("report --in " + (dir / "a" / "report.json").string() + " --format csv"), 0);
}

TEST(Cli, ExitCodes) {
    const auto dir = scratch("exit");
    EXPECT_EQ(run_cli(""), 1);
    EXPECT_EQ(run_cli("analyze --log /nonexistent --out x"), 1);
    EXPECT_EQ(run_cli("report --in /dev/null --format yaml"), 1);

    std::ofstream(dir / "bad.jsonl") << "{not json}\n{\"also\": 1}\n";
    EXPECT_EQ(run_cli("analyze --log " + (dir / "bad.jsonl").string() + " --out " + (dir / "o").string()), 2);

    // Scores forced out of [0, 1] are rejected rather than clipped.
    std::ofstream(dir / "wild.json") << R"({"kind":"sines","fs":8,"duration":20,"components":[{"amplitude":1,"freq":1}]})";
    EXPECT_EQ(run_cli("simulate --scenario " + (dir / "wild.json").string() + " --out " +
                      (dir / "wild.jsonl").string()),
              2);

    std::ofstream(dir / "probe.json") << R"({"endpoint_url":"http://127.0.0.1:9/v1","model_snapshot":"m",
      "task":{"options":["A","B"],"key":["A"],"system_prompt":"s","user_prompt":"u"},
      "start":"2020-01-01T00:00:00Z","end":"2020-01-01T00:00:00Z","log_path":"probe.jsonl"})";
    EXPECT_EQ(run_cli("probe --config " + (dir / "probe.json").string()), 1) << "missing API key";
}

TEST(Cli, ProbeExitStatus) {
    const auto dir = scratch("probe");
    const std::string task = R"("task":{"options":["A","B"],"key":["A"],"system_prompt":"s","user_prompt":"u"})";
    const std::string env = std::string("TEMPORAL_AUDIT_API_KEY=sk-test ") + TAUDIT_CLI + " probe --config ";

    // Every slot already passed: nothing to do.
    std::ofstream(dir / "past.json") << R"({"endpoint_url":"http://127.0.0.1:9/v1","model_snapshot":"m",)" << task
                                     << R"(,"start":"2020-01-01T00:00:00Z","end":"2020-01-01T03:00:00Z","log_path":"past.jsonl"})";
    int rc = std::system((env + (dir / "past.json").string() + " > /dev/null 2>&1").c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 0);
    EXPECT_EQ(read_measurement_log(dir / "past.jsonl").lines, 0u);

    // One slot a second from now against a closed port: every request fails.
    const auto soon = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()) + std::chrono::seconds(1);
    const std::string t = format_rfc3339(std::chrono::time_point_cast<Duration>(soon));
    std::ofstream(dir / "now.json") << R"({"endpoint_url":"http://127.0.0.1:9/v1","model_snapshot":"m",)" << task
                                    << R"(,"replicates_per_slot":2,"max_retries":0,"start":")" << t << R"(","end":")"
                                    << t << R"(","log_path":"now.jsonl"})";
    rc = std::system((env + (dir / "now.json").string() + " > /dev/null 2>&1").c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 3);
    const auto log = read_measurement_log(dir / "now.jsonl");
    EXPECT_EQ(log.lines, 2u);
    EXPECT_EQ(log.unscored, 2u);
}
