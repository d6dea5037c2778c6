#include "taudit/probe.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "taudit/error.hpp"

namespace taudit {

using nlohmann::json;

void ProbeConfig::validate() const {
    if (endpoint_url.empty()) {
        throw DataError("probe config: endpoint_url is empty");
    }
    if (model_snapshot.empty()) {
        throw DataError("probe config: model_snapshot is empty");
    }
    if (!(temperature >= 0.0)) {
        throw DataError("probe config: temperature must be >= 0");
    }
    if (replicates_per_slot < 1) {
        throw DataError("probe config: replicates_per_slot must be >= 1");
    }
    if (interval < std::chrono::minutes(1)) {
        throw DataError("probe config: interval must be at least one minute");
    }
    if (end < start) {
        throw DataError("probe config: end precedes start");
    }
    if (max_retries < 0 || concurrency_limit < 1) {
        throw DataError("probe config: max_retries must be >= 0 and concurrency_limit >= 1");
    }
    if (request_timeout <= Duration::zero()) {
        throw DataError("probe config: request_timeout must be positive");
    }
    if (log_path.empty()) {
        throw DataError("probe config: log_path is empty");
    }
    task.validate();
}

ProbeConfig probe_config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
    ProbeConfig cfg;
    try {
        const json j = json::parse(text);
        cfg.endpoint_url = j.at("endpoint_url").get<std::string>();
        cfg.model_snapshot = j.at("model_snapshot").get<std::string>();
        cfg.temperature = j.value("temperature", 1.0);
        if (j.contains("task")) {
            cfg.task = task_spec_from_json(j.at("task").dump());
        } else {
            std::filesystem::path p = j.at("task_file").get<std::string>();
            cfg.task = load_task_spec(p.is_absolute() ? p : base_dir / p);
        }
        cfg.replicates_per_slot = j.value("replicates_per_slot", 10);
        cfg.interval = from_seconds(j.value("interval_seconds", 10800.0));
        cfg.start = parse_rfc3339(j.at("start").get<std::string>()).utc;
        cfg.end = parse_rfc3339(j.at("end").get<std::string>()).utc;
        cfg.request_timeout = from_seconds(j.value("request_timeout_seconds", 120.0));
        cfg.max_retries = j.value("max_retries", 3);
        cfg.concurrency_limit = j.value("concurrency_limit", 10);
        cfg.retry_base = from_seconds(j.value("retry_base_seconds", 2.0));
        std::filesystem::path log = j.at("log_path").get<std::string>();
        cfg.log_path = log.is_absolute() || base_dir.empty() ? log : base_dir / log;
        cfg.log_utc_offset = parse_utc_offset(j.value("log_utc_offset", std::string("Z")));
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid probe config: ") + e.what());
    }
    if (cfg.endpoint_url.find("api_key") != std::string::npos) {
        throw DataError("probe config: credentials belong in " + std::string(kApiKeyEnv) + ", not the config");
    }
    cfg.validate();
    return cfg;
}

ProbeConfig load_probe_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open probe config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return probe_config_from_json(ss.str(), path.parent_path());
}

std::string to_string(ProbeStatus s) {
    switch (s) {
        case ProbeStatus::scored: return "scored";
        case ProbeStatus::parse_failed: return "parse_failed";
        case ProbeStatus::transport_failed: return "transport_failed";
    }
    return "transport_failed";
}

Instant SystemClock::now() {
    return std::chrono::time_point_cast<Duration>(std::chrono::system_clock::now());
}

void SystemClock::sleep_until(Instant t) {
    std::this_thread::sleep_until(t);
}

void SystemClock::sleep_for(Duration d) {
    std::this_thread::sleep_for(d);
}

std::string build_request_body(const ProbeConfig& cfg) {
    json body;
    body["model"] = cfg.model_snapshot;
    body["temperature"] = cfg.temperature;
    body["messages"] = json::array({
        {{"role", "system"}, {"content", cfg.task.system_prompt}},
        {{"role", "user"}, {"content", cfg.task.user_prompt}},
    });
    body["response_format"] = {{"type", "json_object"}};
    return body.dump();
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string extract_message_content(const std::string& response_body) {
    try {
        const json j = json::parse(response_body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) {
            throw DataError("message content is not a string");
        }
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed chat-completions response: ") + e.what());
    }
}

ProbeClient::ProbeClient(ProbeConfig cfg, HttpTransport& transport, Clock& clock, std::string api_key)
    : cfg_(std::move(cfg)), transport_(transport), clock_(clock), api_key_(std::move(api_key)) {
    body_ = build_request_body(cfg_);
    url_ = cfg_.endpoint_url;
    while (!url_.empty() && url_.back() == '/') {
        url_.pop_back();
    }
    url_ += "/chat/completions";
}

ProbeOutcome ProbeClient::issue_request(int replicate_index, Instant slot) const {
    ProbeOutcome out;
    out.slot_timestamp = slot;
    out.replicate_index = replicate_index;

    const HttpHeaders headers{{"Authorization", "Bearer " + api_key_}};
    std::mt19937_64 jitter(static_cast<std::uint64_t>(slot.time_since_epoch().count()) ^
                           (static_cast<std::uint64_t>(replicate_index) << 48));
    std::uniform_real_distribution<double> spread(0.5, 1.5);

    const auto t_begin = std::chrono::steady_clock::now();
    HttpResponse resp;
    for (int attempt = 1; attempt <= cfg_.max_retries + 1; ++attempt) {
        out.attempt_count = attempt;
        resp = transport_.post(url_, body_, headers, cfg_.request_timeout);
        const bool retryable = resp.status == 0 || resp.status >= 500;
        if (!retryable || attempt == cfg_.max_retries + 1) {
            break;
        }
        const double backoff_ms =
            static_cast<double>(cfg_.retry_base.count()) * std::ldexp(1.0, attempt - 1) * spread(jitter);
        clock_.sleep_for(Duration{static_cast<Duration::rep>(backoff_ms)});
    }
    out.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_begin).count();
    out.raw_response = resp.body;

    if (resp.status < 200 || resp.status >= 300) {
        out.status = ProbeStatus::transport_failed;
        out.error = resp.status == 0 ? "no response: " + resp.error : "HTTP " + std::to_string(resp.status);
        return out;
    }
    try {
        const std::string content = extract_message_content(resp.body);
        out.raw_response = content;
        const auto answer = parse_structured(content, cfg_.task);
        out.score = score_response(answer.selected, cfg_.task).to_double();
        out.status = ProbeStatus::scored;
    } catch (const DataError& e) {
        out.status = ProbeStatus::parse_failed;
        out.error = e.what();
    }
    return out;
}

JsonlLogSink::JsonlLogSink(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) {
        std::string buf;
        {
            std::ifstream in(path_, std::ios::binary);
            buf.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        }
        std::size_t keep = 0;  // bytes of complete, valid lines
        std::size_t pos = 0;
        while (pos < buf.size()) {
            const std::size_t nl = buf.find('\n', pos);
            if (nl == std::string::npos) {
                break;
            }
            const std::string text = buf.substr(pos, nl - pos);
            if (text.find_first_not_of(" \t\r") != std::string::npos) {
                try {
                    const auto line = parse_log_line(text);
                    existing_.emplace(line.record.timestamp.utc, line.record.replicate_index);
                } catch (const DataError&) {
                    break;
                }
            }
            pos = nl + 1;
            keep = pos;
        }
        if (keep < buf.size()) {
            std::ofstream q(path_.string() + ".quarantine", std::ios::binary | std::ios::app);
            q.write(buf.data() + keep, static_cast<std::streamsize>(buf.size() - keep));
            q << '\n';
            std::filesystem::resize_file(path_, keep);
            quarantined_ = true;
        }
    }
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) {
        throw DataError("cannot open log for appending: " + path_.string());
    }
}

void JsonlLogSink::append(const LogLine& line) {
    const std::string text = to_jsonl(line) + "\n";
    std::lock_guard lock(mutex_);
    out_.write(text.data(), static_cast<std::streamsize>(text.size()));
    out_.flush();
    if (!out_) {
        throw DataError("write to log failed: " + path_.string());
    }
}

LogLine to_log_line(const ProbeOutcome& outcome, const ProbeConfig& cfg) {
    LogLine line;
    line.record.timestamp = Timestamp{outcome.slot_timestamp, cfg.log_utc_offset};
    line.record.replicate_index = outcome.replicate_index;
    line.record.score = outcome.score.value_or(0.0);
    line.record.raw_response = outcome.raw_response;
    auto& meta = line.record.metadata;
    meta["model"] = cfg.model_snapshot;
    meta["temperature"] = json(cfg.temperature).dump();
    meta["grid_t0"] = format_rfc3339(cfg.start, cfg.log_utc_offset);
    meta["grid_t_end"] = format_rfc3339(cfg.end, cfg.log_utc_offset);
    meta["grid_dt_ms"] = std::to_string(cfg.interval.count());
    if (!outcome.error.empty()) {
        meta["error"] = outcome.error;
    }
    line.status = to_string(outcome.status);
    line.score = outcome.score;
    line.latency_ms = outcome.latency_ms;
    line.attempts = outcome.attempt_count;
    return line;
}

ScheduleSummary run_schedule(const ProbeConfig& cfg, JsonlLogSink& sink, HttpTransport& transport, Clock& clock,
                             const std::string& api_key, const std::function<void(const std::string&)>& warn) {
    cfg.validate();
    const ProbeClient client(cfg, transport, clock, api_key);
    ScheduleSummary summary;
    summary.request_body_hash = fnv1a64(client.request_body());
    const Duration grace = cfg.interval / 10;

    for (Instant slot = cfg.start; slot <= cfg.end; slot += cfg.interval) {
        ++summary.slots_total;
        std::vector<int> pending;
        for (int r = 0; r < cfg.replicates_per_slot; ++r) {
            if (!sink.existing().contains({slot, r})) {
                pending.push_back(r);
            }
        }
        if (pending.empty()) {
            ++summary.slots_resumed;
            continue;
        }
        if (clock.now() > slot + grace) {
            ++summary.slots_missed;
            if (warn) {
                warn("slot " + format_rfc3339(slot, cfg.log_utc_offset) + " missed; left as a gap");
            }
            continue;
        }
        clock.sleep_until(slot);

        std::vector<ProbeOutcome> outcomes(pending.size());
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < pending.size(); i = next++) {
                try {
                    outcomes[i] = client.issue_request(pending[i], slot);
                    sink.append(to_log_line(outcomes[i], cfg));
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        };
        {
            const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.concurrency_limit), pending.size());
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < n_workers; ++w) {
                pool.emplace_back(worker);
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
        ++summary.slots_run;
        for (const auto& o : outcomes) {
            switch (o.status) {
                case ProbeStatus::scored: ++summary.scored; break;
                case ProbeStatus::parse_failed: ++summary.parse_failed; break;
                case ProbeStatus::transport_failed: ++summary.transport_failed; break;
            }
        }
    }
    return summary;
}

}  // namespace taudit
