#include "taudit/log_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>

#include "taudit/error.hpp"

namespace taudit {

using nlohmann::json;

std::string to_jsonl(const LogLine& line) {
    const auto& r = line.record;
    json j;
    j["ts"] = format_rfc3339(r.timestamp.utc, r.timestamp.offset_minutes);
    j["rep"] = r.replicate_index;
    j["score"] = line.score ? json(*line.score) : json(nullptr);
    if (r.raw_response) {
        j["raw"] = *r.raw_response;
    }
    j["meta"] = r.metadata;
    j["status"] = line.status;
    if (line.latency_ms) {
        j["latency_ms"] = *line.latency_ms;
    }
    if (line.attempts) {
        j["attempts"] = *line.attempts;
    }
    return j.dump();
}

LogLine parse_log_line(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed log line: ") + e.what());
    }
    if (!j.is_object() || !j.contains("ts") || !j.contains("rep")) {
        throw DataError("log line lacks `ts` or `rep`");
    }
    LogLine line;
    try {
        line.record.timestamp = parse_rfc3339(j.at("ts").get<std::string>());
        line.record.replicate_index = j.at("rep").get<int>();
        line.status = j.value("status", std::string("scored"));
        if (j.contains("score") && !j["score"].is_null()) {
            line.score = j["score"].get<double>();
        }
        if (j.contains("raw") && j["raw"].is_string()) {
            line.record.raw_response = j["raw"].get<std::string>();
        }
        if (j.contains("meta") && j["meta"].is_object()) {
            for (const auto& [k, v] : j["meta"].items()) {
                line.record.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
        }
        if (j.contains("latency_ms") && j["latency_ms"].is_number()) {
            line.latency_ms = j["latency_ms"].get<double>();
        }
        if (j.contains("attempts") && j["attempts"].is_number_integer()) {
            line.attempts = j["attempts"].get<int>();
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("bad field type in log line: ") + e.what());
    }
    if (line.record.replicate_index < 0) {
        throw DataError("negative replicate index in log line");
    }
    if (line.status == "scored") {
        if (!line.score) {
            throw DataError("scored log line without a score");
        }
        if (!(*line.score >= 0.0 && *line.score <= 1.0)) {
            throw DataError("score outside [0,1] in log line");
        }
        line.record.score = *line.score;
    } else if (line.status != "parse_failed" && line.status != "transport_failed") {
        throw DataError("unknown status `" + line.status + "` in log line");
    }
    return line;
}

LogContents read_measurement_log(std::istream& in) {
    LogContents out;
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < buf.size()) {
        const std::size_t nl = buf.find('\n', pos);
        const bool terminated = nl != std::string::npos;
        std::string text = buf.substr(pos, terminated ? nl - pos : std::string::npos);
        pos = terminated ? nl + 1 : buf.size();
        ++line_no;
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        LogLine line;
        try {
            line = parse_log_line(text);
        } catch (const DataError& e) {
            if (!terminated) {
                out.truncated_tail = true;
                break;
            }
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        ++out.lines;
        if (line.status == "scored") {
            out.records.push_back(std::move(line.record));
        } else {
            ++out.unscored;
        }
    }
    return out;
}

LogContents read_measurement_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open log " + path.string());
    }
    return read_measurement_log(in);
}

void write_measurement_log(const std::filesystem::path& path, std::span<const MeasurementRecord> records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write log " + path.string());
    }
    for (const auto& r : records) {
        LogLine line{r, "scored", r.score, std::nullopt, std::nullopt};
        out << to_jsonl(line) << '\n';
    }
    if (!out) {
        throw DataError("write failed for log " + path.string());
    }
}

void write_measurements_csv(std::ostream& out, std::span<const MeasurementRecord> records) {
    out << "ts,rep,score\n";
    for (const auto& r : records) {
        out << format_rfc3339(r.timestamp.utc, r.timestamp.offset_minutes) << ',' << r.replicate_index << ','
            << json(r.score).dump() << '\n';
    }
}

GridSpec infer_grid(std::span<const MeasurementRecord> records) {
    std::vector<Instant> ts;
    ts.reserve(records.size());
    for (const auto& r : records) {
        ts.push_back(r.timestamp.utc);
    }
    std::sort(ts.begin(), ts.end());

    // Cluster replicates of one slot (jitter below a minute) before measuring spacing.
    std::map<long long, std::size_t> gap_counts;
    Instant prev = ts.empty() ? Instant{} : ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const auto gap = ts[i] - prev;
        if (gap < std::chrono::minutes(1)) {
            continue;
        }
        const long long rounded = std::llround(std::chrono::duration<double, std::ratio<60>>(gap).count());
        ++gap_counts[rounded];
        prev = ts[i];
    }
    if (gap_counts.empty()) {
        throw DataError("cannot infer sampling interval: fewer than two distinct timestamps");
    }
    const auto mode = std::max_element(gap_counts.begin(), gap_counts.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    return GridSpec{ts.front(), std::chrono::minutes(mode->first), ts.back()};
}

}  // namespace taudit
