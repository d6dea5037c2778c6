#include "taudit/scenario.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "taudit/error.hpp"
#include "taudit/synth.hpp"

namespace taudit {
namespace {

using nlohmann::json;

std::vector<double> table_from(const json& j) {
    if (j.is_array()) {
        return j.get<std::vector<double>>();
    }
    return periodic_table(j.at("size").get<std::size_t>(), j.value("cycles", 1.0), j.value("amplitude", 1.0),
                          j.value("phase_deg", 0.0), j.value("offset", 0.0));
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    Scenario sc;
    try {
        const json j = json::parse(text);
        sc.kind = j.at("kind").get<std::string>();
        const Instant t0 = j.contains("t0") ? parse_rfc3339(j.at("t0").get<std::string>()).utc
                                            : default_synth_origin();
        const double fs = j.at("fs").get<double>();
        const double noise = j.value("noise_sd", 0.0);
        const auto seed = j.value("seed", std::uint64_t{1});
        const double baseline = j.value("baseline", j.value("offset", 0.0));
        const double scale = j.value("scale", 1.0);

        if (sc.kind == "sines") {
            std::vector<SineComponent> comps;
            for (const auto& c : j.at("components")) {
                comps.push_back(SineComponent{c.at("amplitude").get<double>(), c.at("freq").get<double>(),
                                              c.value("phase_deg", 0.0)});
            }
            const Duration unit = from_seconds(j.value("time_unit_seconds", 86400.0));
            sc.series = synth_sines(comps, fs, j.at("duration").get<double>(), noise, seed, t0, unit);
        } else if (sc.kind == "modulated") {
            const auto profile = table_from(j.at("daily_profile"));
            const auto envelope = table_from(j.at("weekly_envelope"));
            sc.series = synth_modulated(profile, envelope, 0.0, noise, fs, j.at("days").get<double>(), seed, t0);
        } else {
            throw DataError("unknown scenario kind '" + sc.kind + "'");
        }
        for (auto& p : sc.series.points) {
            for (auto& v : p.replicate_scores) {
                v = baseline + scale * v;
            }
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed scenario: ") + e.what());
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open scenario " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

std::vector<MeasurementRecord> scenario_records(const Scenario& sc) {
    const auto& s = sc.series;
    if (s.size() == 0) {
        return {};
    }
    const std::map<std::string, std::string> meta{
        {"grid_t0", format_rfc3339(s.t0)},
        {"grid_dt_ms", std::to_string(s.dt.count())},
        {"grid_t_end", format_rfc3339(s.time_at(s.size() - 1))},
        {"source", "simulate:" + sc.kind},
    };
    std::vector<MeasurementRecord> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& p = s.points[i];
        for (std::size_t r = 0; r < p.replicate_scores.size(); ++r) {
            const double v = p.replicate_scores[r];
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DataError("simulated score " + std::to_string(v) + " at slot " + std::to_string(i) +
                                " leaves [0,1]; adjust baseline/scale");
            }
            out.push_back(MeasurementRecord{Timestamp{s.time_at(i), 0}, static_cast<int>(r), v, std::nullopt, meta});
        }
    }
    return out;
}

}  // namespace taudit
