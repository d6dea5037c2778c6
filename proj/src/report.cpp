#include "taudit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "taudit/error.hpp"

namespace taudit {
namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

std::string num(double v) {
    if (std::isnan(v)) {
        return "";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Json cell_json(const GridCell& c) {
    return Json{{"mean", number_or_null(c.mean)}, {"count", c.count}};
}

Json calendar_json(const std::vector<CalendarMean>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        out.push_back(Json{{"label", r.label}, {"mean", r.mean}, {"sd", r.sd}, {"count", r.count}});
    }
    return out;
}

Json grid_json(const WeekdayHourGrid& g) {
    Json cells = Json::array();
    for (const auto& row : g.cells) {
        Json r = Json::array();
        for (const auto& c : row) {
            r.push_back(cell_json(c));
        }
        cells.push_back(std::move(r));
    }
    Json wd = Json::array(), hr = Json::array();
    for (const auto& c : g.weekday_marginal) {
        wd.push_back(cell_json(c));
    }
    for (const auto& c : g.hour_marginal) {
        hr.push_back(cell_json(c));
    }
    auto extremum = [&](const WeekdayHourGrid::Extremum& e) {
        const auto minutes = g.slot_width * e.slot;
        char hhmm[8];
        std::snprintf(hhmm, sizeof hhmm, "%02d:%02d",
                      static_cast<int>(std::chrono::duration_cast<std::chrono::hours>(minutes).count()),
                      static_cast<int>(std::chrono::duration_cast<std::chrono::minutes>(minutes).count() % 60));
        return Json{{"weekday", weekday_name(e.weekday)}, {"slot", e.slot}, {"local_time", hhmm}, {"mean", e.mean}};
    };
    return Json{{"timezone", format_utc_offset(g.timezone_offset)},
                {"slots_per_day", g.slots_per_day},
                {"slot_width_ms", g.slot_width.count()},
                {"max", extremum(g.max_cell())},
                {"min", extremum(g.min_cell())},
                {"weekday_marginal", std::move(wd)},
                {"hour_marginal", std::move(hr)},
                {"cells", std::move(cells)}};
}

Json config_json(const AnalysisConfig& c) {
    Json model{{"f_d", c.model.f_d.str()}, {"f_w", c.model.f_w.str()}, {"k_max", c.model.k_max},
               {"m_max", c.model.m_max}};
    Json j{{"nperseg_div", c.nperseg_div},
           {"overlap", c.overlap},
           {"window", "hann"},
           {"normalization", to_string(c.normalization)},
           {"detrend", to_string(c.detrend)},
           {"n_perm", c.n_perm},
           {"alpha", c.alpha},
           {"seed", c.seed},
           {"hac_days", c.hac_days},
           {"tz_offset", format_utc_offset(c.tz_offset_minutes)},
           {"peak_rule", to_string(c.peak_rule)},
           {"modulation_model", std::move(model)},
           {"classify_tolerance", c.classify_tolerance},
           {"horizon_days", c.horizon_days},
           {"resolution_per_day", c.resolution_per_day}};
    if (c.grid) {
        j["grid"] = Json{{"t0", format_rfc3339(c.grid->t0)},
                         {"dt_ms", c.grid->dt.count()},
                         {"t_end", format_rfc3339(c.grid->t_end)}};
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw DataError("write failed: " + path.string());
    }
}

template <class Fn>
void write_csv(const std::filesystem::path& path, Fn&& fill) {
    std::string text;
    fill(text);
    write_text(path, text);
}

}  // namespace

std::string to_string(PeakRule rule) {
    return rule == PeakRule::all_exceeding ? "all_exceeding" : "run_local_maxima";
}

Json report_to_json(const AuditReport& r) {
    const auto& s = r.summary;
    Json gaps = Json::array();
    for (auto g : s.gap_slots) {
        gaps.push_back(g);
    }
    Json summary{{"n", s.n},
                 {"fs_per_day", s.fs},
                 {"dt_ms", s.dt.count()},
                 {"t0", format_rfc3339(s.t0)},
                 {"t_end", format_rfc3339(s.t_end)},
                 {"measurements", s.n_measurements},
                 {"unscored_lines", s.unscored_lines},
                 {"mean", s.mean},
                 {"sd_raw", s.sd_raw},
                 {"sd_avg", s.sd_avg},
                 {"gap_slots", std::move(gaps)}};

    const auto& d = r.drift;
    Json drift{{"slope_per_day", d.slope},
               {"intercept", d.intercept},
               {"se_hac", number_or_null(d.se_slope_hac)},
               {"t", number_or_null(d.t_stat)},
               {"p", d.p_value},
               {"lag_samples", d.lag}};

    Json peaks = Json::array();
    for (const auto& p : r.peaks) {
        peaks.push_back(Json{{"period", period_label(p.peak.freq)},
                             {"freq_per_day", p.peak.freq},
                             {"period_hours", 24.0 / p.peak.freq},
                             {"bin", p.peak.bin_index},
                             {"power", p.peak.power},
                             {"amplitude", p.peak.amplitude},
                             {"threshold", p.peak.threshold},
                             {"phase_deg", p.fit.phase_deg},
                             {"fit_amplitude", p.fit.amplitude},
                             {"classification", p.classification.label_text()},
                             {"predicted_freq_per_day", p.classification.predicted_freq},
                             {"deviation", p.classification.deviation}});
    }

    Json j{{"series_summary", std::move(summary)},
           {"drift", std::move(drift)},
           {"spectrum_file", kSpectrumFile},
           {"spectrum",
            Json{{"nperseg", r.spectrum.nperseg},
                 {"segments", r.spectrum.n_segments},
                 {"df_per_day", r.spectrum.df},
                 {"bins", r.spectrum.power.size()}}},
           {"peaks", std::move(peaks)},
           {"explained_variance",
            Json{{"fraction", r.explained.fraction}, {"raw", r.explained.raw}, {"clamped", r.explained.clamped}}},
           {"reconstruction_peak_to_peak",
            r.reconstruction_peak_to_peak ? Json(*r.reconstruction_peak_to_peak) : Json(nullptr)}};
    Json grids{{"daily", calendar_json(r.daily)}, {"weekly", calendar_json(r.weekly)}};
    grids["weekday_hour"] = r.grid ? grid_json(*r.grid) : Json(nullptr);
    j["grids"] = std::move(grids);
    j["config_echo"] = config_json(r.config);
    return j;
}

void write_report(const AuditReport& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / kReportFile, report_to_json(r).dump(2) + "\n");

    write_csv(dir / kSpectrumFile, [&](std::string& t) {
        t += "freq_per_day,power,threshold\n";
        for (std::size_t k = 0; k < r.spectrum.power.size(); ++k) {
            t += num(r.spectrum.freqs[k]) + "," + num(r.spectrum.power[k]) + "," + num(r.band.threshold[k]) + "\n";
        }
    });
    write_csv(dir / "peaks.csv", [&](std::string& t) {
        t += "period,freq_per_day,power,amplitude,phase_deg,threshold,classification\n";
        for (const auto& p : r.peaks) {
            t += period_label(p.peak.freq) + "," + num(p.peak.freq) + "," + num(p.peak.power) + "," +
                 num(p.peak.amplitude) + "," + num(p.fit.phase_deg) + "," + num(p.peak.threshold) + ",\"" +
                 p.classification.label_text() + "\"\n";
        }
    });
    write_csv(dir / "slot_means.csv", [&](std::string& t) {
        t += "ts,mean,imputed\n";
        const auto gaps = r.summary.gap_slots;
        std::size_t g = 0;
        for (std::size_t i = 0; i < r.slot_means.size(); ++i) {
            const bool imputed = g < gaps.size() && gaps[g] == i;
            g += imputed ? 1 : 0;
            t += format_rfc3339(r.summary.t0 + r.summary.dt * static_cast<Duration::rep>(i)) + "," +
                 num(r.slot_means[i]) + "," + (imputed ? "1" : "0") + "\n";
        }
    });
    auto calendar = [&](const char* name, const std::vector<CalendarMean>& rows) {
        write_csv(dir / name, [&](std::string& t) {
            t += "date,mean,sd,count\n";
            for (const auto& c : rows) {
                t += c.label + "," + num(c.mean) + "," + num(c.sd) + "," + std::to_string(c.count) + "\n";
            }
        });
    };
    calendar("daily_means.csv", r.daily);
    calendar("weekly_means.csv", r.weekly);
    if (r.grid) {
        write_csv(dir / "weekday_hour.csv", [&](std::string& t) {
            t += "weekday,slot,mean,count\n";
            for (int w = 0; w < 7; ++w) {
                for (int h = 0; h < r.grid->slots_per_day; ++h) {
                    const auto& c = r.grid->cells[w][h];
                    t += weekday_name(w) + "," + std::to_string(h) + "," + num(c.mean) + "," +
                         std::to_string(c.count) + "\n";
                }
            }
        });
    }
}

Json load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open report " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw DataError("malformed report " + path.string() + ": " + e.what());
    }
}

void render_text(const Json& j, std::ostream& out) {
    try {
        const auto& s = j.at("series_summary");
        out << "Series: N=" << s.at("n").get<long>() << "  fs=" << fixed(s.at("fs_per_day").get<double>(), 3)
            << "/day  " << s.at("t0").get<std::string>() << " .. " << s.at("t_end").get<std::string>() << "\n";
        out << "  mean=" << fixed(s.at("mean").get<double>(), 4) << "  sd_raw=" << fixed(s.at("sd_raw").get<double>(), 4)
            << "  sd_avg=" << fixed(s.at("sd_avg").get<double>(), 4) << "  gaps=" << s.at("gap_slots").size() << "\n\n";

        const auto& d = j.at("drift");
        out << "Drift: slope=" << sci(d.at("slope_per_day").get<double>()) << "/day";
        out << "  t=" << (d.at("t").is_null() ? std::string("inf") : fixed(d.at("t").get<double>(), 3));
        out << "  p=" << fixed(d.at("p").get<double>(), 4) << "  (HAC lag " << d.at("lag_samples").get<long>()
            << ")\n\n";

        out << "Peaks (" << j.at("peaks").size() << "):\n";
        char line[256];
        std::snprintf(line, sizeof line, "  %-8s %10s %10s %10s %10s  %s\n", "period", "power", "amplitude",
                      "phase", "threshold", "class");
        out << line;
        for (const auto& p : j.at("peaks")) {
            std::snprintf(line, sizeof line, "  %-8s %10.6f %10.4f %10.1f %10.6f  %s\n",
                          p.at("period").get<std::string>().c_str(), p.at("power").get<double>(),
                          p.at("amplitude").get<double>(), p.at("phase_deg").get<double>(),
                          p.at("threshold").get<double>(), p.at("classification").get<std::string>().c_str());
            out << line;
        }
        out << "\nExplained variance: " << fixed(j.at("explained_variance").at("fraction").get<double>(), 4) << "\n";
        const auto& ptp = j.at("reconstruction_peak_to_peak");
        out << "Reconstruction peak-to-peak: " << (ptp.is_null() ? std::string("n/a") : fixed(ptp.get<double>(), 4))
            << "\n";
        const auto& g = j.at("grids").at("weekday_hour");
        if (!g.is_null()) {
            for (const char* which : {"max", "min"}) {
                const auto& e = g.at(which);
                out << "Grid " << which << ": " << e.at("weekday").get<std::string>() << " "
                    << e.at("local_time").get<std::string>() << " (" << g.at("timezone").get<std::string>()
                    << ") mean=" << fixed(e.at("mean").get<double>(), 4) << "\n";
            }
        }
    } catch (const Json::exception& e) {
        throw DataError(std::string("report is missing fields: ") + e.what());
    }
}

void render_csv(const Json& j, std::ostream& out) {
    try {
        out << "period,freq_per_day,power,amplitude,phase_deg,threshold,classification\n";
        for (const auto& p : j.at("peaks")) {
            out << p.at("period").get<std::string>() << "," << num(p.at("freq_per_day").get<double>()) << ","
                << num(p.at("power").get<double>()) << "," << num(p.at("amplitude").get<double>()) << ","
                << num(p.at("phase_deg").get<double>()) << "," << num(p.at("threshold").get<double>()) << ",\""
                << p.at("classification").get<std::string>() << "\"\n";
        }
    } catch (const Json::exception& e) {
        throw DataError(std::string("report is missing fields: ") + e.what());
    }
}

}  // namespace taudit
