// temporal-audit: probe a model on a fixed schedule, simulate logs, analyze
// them for drift and periodicity, and render reports.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "taudit/analysis.hpp"
#include "taudit/error.hpp"
#include "taudit/probe.hpp"
#include "taudit/report.hpp"
#include "taudit/scenario.hpp"

using namespace taudit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kTransport = 3 };

int cmd_probe(const std::string& config_path) {
    const ProbeConfig cfg = load_probe_config(config_path);
    const char* key = std::getenv(kApiKeyEnv);
    if (key == nullptr || *key == '\0') {
        throw std::invalid_argument(std::string("set ") + kApiKeyEnv + " to the provider API key");
    }
    JsonlLogSink sink(cfg.log_path);
    if (sink.quarantined_tail()) {
        std::cerr << "warning: incomplete final log line moved to " << cfg.log_path.string() << ".quarantine\n";
    }
    auto transport = make_http_transport();
    SystemClock clock;
    const auto summary = run_schedule(cfg, sink, *transport, clock, key,
                                      [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; });
    std::cerr << "slots " << summary.slots_run << "/" << summary.slots_total << " run, " << summary.slots_missed
              << " missed, " << summary.slots_resumed << " resumed; scored " << summary.scored << ", parse_failed "
              << summary.parse_failed << ", transport_failed " << summary.transport_failed << "\n";
    const bool all_transport_failed =
        summary.transport_failed > 0 && summary.scored == 0 && summary.parse_failed == 0;
    return all_transport_failed ? kTransport : kOk;
}

int cmd_analyze(const std::string& log, AnalysisConfig cfg, const std::string& tz, const std::string& out) {
    if (!tz.empty()) {
        cfg.tz_offset_minutes = parse_utc_offset(tz);
    }
    const AuditReport report = analyze_log(log, cfg);
    write_report(report, out);
    {
        const LogContents contents = read_measurement_log(log);
        std::ofstream csv(std::filesystem::path(out) / "measurements.csv");
        write_measurements_csv(csv, contents.records);
    }
    std::cerr << "wrote " << (std::filesystem::path(out) / kReportFile).string() << " (" << report.peaks.size()
              << " significant peaks)\n";
    return kOk;
}

int cmd_simulate(const std::string& scenario, const std::string& out) {
    const auto records = scenario_records(load_scenario(scenario));
    const auto parent = std::filesystem::path(out).parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    write_measurement_log(out, records);
    return kOk;
}

int cmd_report(const std::string& in, const std::string& format) {
    const auto report = load_report(in);
    if (format == "csv") {
        render_csv(report, std::cout);
    } else {
        render_text(report, std::cout);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal performance audit for language-model APIs"};
    app.require_subcommand(1);

    std::string probe_config;
    auto* probe = app.add_subcommand("probe", "Run the measurement schedule");
    probe->add_option("--config", probe_config, "Probe configuration JSON")->required()->check(CLI::ExistingFile);

    AnalysisConfig acfg;
    std::string log_path, out_dir, tz, grid_t0, grid_t_end;
    double grid_dt_seconds = 0.0;
    bool all_exceeding = false;
    auto* analyze = app.add_subcommand("analyze", "Drift and periodicity analysis of a measurement log");
    analyze->add_option("--log", log_path, "JSONL measurement log")->required()->check(CLI::ExistingFile);
    analyze->add_option("--out", out_dir, "Output directory")->required();
    analyze->add_option("--nperseg-div", acfg.nperseg_div, "Welch segment length divisor")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--nperm", acfg.n_perm, "Permutations for the significance band")
        ->capture_default_str()
        ->check(CLI::Range(100, 1000000));
    analyze->add_option("--alpha", acfg.alpha, "Significance level")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    analyze->add_option("--hac-days", acfg.hac_days, "Newey-West lag in days")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    analyze->add_option("--seed", acfg.seed, "Top-level random seed")->capture_default_str();
    analyze->add_option("--tz-offset", tz, "UTC offset for calendar grids, e.g. +02:00");
    analyze->add_option("--threads", acfg.threads, "Surrogate worker threads (0 = all cores)");
    analyze->add_option("--grid-t0", grid_t0, "Grid start (RFC 3339); overrides log metadata");
    analyze->add_option("--grid-dt", grid_dt_seconds, "Grid spacing in seconds")->check(CLI::PositiveNumber);
    analyze->add_option("--grid-end", grid_t_end, "Grid end (RFC 3339)");
    analyze->add_flag("--all-exceeding", all_exceeding, "Report every bin above threshold, not only local maxima");

    std::string scenario, sim_out;
    auto* simulate = app.add_subcommand("simulate", "Write a synthetic measurement log");
    simulate->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", sim_out, "Output log path")->required();

    std::string report_in, format = "text";
    auto* report = app.add_subcommand("report", "Render an existing report");
    report->add_option("--in", report_in, "report.json")->required()->check(CLI::ExistingFile);
    report->add_option("--format", format, "text or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*probe) {
            return cmd_probe(probe_config);
        }
        if (*analyze) {
            const int grid_flags = !grid_t0.empty() + (grid_dt_seconds > 0.0) + !grid_t_end.empty();
            if (grid_flags != 0 && grid_flags != 3) {
                throw std::invalid_argument("--grid-t0, --grid-dt and --grid-end go together");
            }
            if (grid_flags == 3) {
                acfg.grid = GridSpec{parse_rfc3339(grid_t0).utc, from_seconds(grid_dt_seconds),
                                     parse_rfc3339(grid_t_end).utc};
            }
            if (all_exceeding) {
                acfg.peak_rule = PeakRule::all_exceeding;
            }
            return cmd_analyze(log_path, acfg, tz, out_dir);
        }
        if (*simulate) {
            return cmd_simulate(scenario, sim_out);
        }
        return cmd_report(report_in, format);
    } catch (const TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kTransport;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
}
