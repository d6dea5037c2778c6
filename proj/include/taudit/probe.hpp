#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "taudit/log_io.hpp"
#include "taudit/scoring.hpp"
#include "taudit/time.hpp"

namespace taudit {

inline constexpr const char* kApiKeyEnv = "TEMPORAL_AUDIT_API_KEY";

/// Fixed probing conditions plus schedule and retry policy.
struct ProbeConfig {
    std::string endpoint_url;  // e.g. https://api.openai.com/v1
    std::string model_snapshot;
    double temperature = 1.0;
    TaskSpec task;
    int replicates_per_slot = 10;
    Duration interval = std::chrono::hours(3);
    Instant start{};
    Instant end{};
    Duration request_timeout = std::chrono::seconds(120);
    int max_retries = 3;
    int concurrency_limit = 10;
    Duration retry_base = std::chrono::seconds(2);
    std::filesystem::path log_path;
    int log_utc_offset = 0;  // minutes, used when writing `ts`

    /// Throws DataError when a field is out of range.
    void validate() const;
};

/// JSON mirror of ProbeConfig. `task` is either an inline object or
/// `task_file` (relative paths resolve against the config's directory).
ProbeConfig load_probe_config(const std::filesystem::path& path);
ProbeConfig probe_config_from_json(const std::string& text, const std::filesystem::path& base_dir = {});

enum class ProbeStatus { scored, parse_failed, transport_failed };
std::string to_string(ProbeStatus s);

struct ProbeOutcome {
    Instant slot_timestamp{};
    int replicate_index = 0;
    ProbeStatus status = ProbeStatus::transport_failed;
    std::optional<double> score;  // present iff scored
    double latency_ms = 0.0;
    std::string raw_response;
    int attempt_count = 0;
    std::string error;
};

struct HttpResponse {
    int status = 0;  // 0: no response (connection error or timeout)
    std::string body;
    std::string error;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& url, const std::string& body, const HttpHeaders& headers,
                              Duration timeout) = 0;
};

/// cpp-httplib backed transport (http and https).
std::unique_ptr<HttpTransport> make_http_transport();

class Clock {
public:
    virtual ~Clock() = default;
    virtual Instant now() = 0;
    virtual void sleep_until(Instant t) = 0;
    virtual void sleep_for(Duration d) = 0;
};

class SystemClock final : public Clock {
public:
    Instant now() override;
    void sleep_until(Instant t) override;
    void sleep_for(Duration d) override;
};

/// Chat-completions request body; identical for every replicate.
std::string build_request_body(const ProbeConfig& cfg);

/// FNV-1a, used to fingerprint request bodies.
std::uint64_t fnv1a64(std::string_view data);

/// Extracts choices[0].message.content from a chat-completions response.
/// Throws DataError when the envelope is malformed.
std::string extract_message_content(const std::string& response_body);

class ProbeClient {
public:
    ProbeClient(ProbeConfig cfg, HttpTransport& transport, Clock& clock, std::string api_key);

    /// One replicate: POST, retry 5xx/timeouts with jittered exponential
    /// backoff, no retry on other non-2xx, then parse and score.
    ProbeOutcome issue_request(int replicate_index, Instant slot) const;

    const ProbeConfig& config() const { return cfg_; }
    const std::string& request_body() const { return body_; }

private:
    ProbeConfig cfg_;
    HttpTransport& transport_;
    Clock& clock_;
    std::string api_key_;
    std::string body_;
    std::string url_;
};

/// Append-only JSONL sink. Opening an existing log moves an incomplete final
/// line to `<log>.quarantine` and truncates it away. Appends are serialized
/// and flushed per line; a failed write throws DataError.
class JsonlLogSink {
public:
    explicit JsonlLogSink(std::filesystem::path path);

    void append(const LogLine& line);

    bool quarantined_tail() const { return quarantined_; }
    /// (slot instant, replicate) pairs already present when the sink opened.
    const std::set<std::pair<Instant, int>>& existing() const { return existing_; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::mutex mutex_;
    bool quarantined_ = false;
    std::set<std::pair<Instant, int>> existing_;
};

LogLine to_log_line(const ProbeOutcome& outcome, const ProbeConfig& cfg);

struct ScheduleSummary {
    std::size_t slots_total = 0;
    std::size_t slots_run = 0;
    std::size_t slots_missed = 0;      // slot time passed (downtime); left as a gap
    std::size_t slots_resumed = 0;     // already complete in the log
    std::size_t scored = 0;
    std::size_t parse_failed = 0;
    std::size_t transport_failed = 0;
    std::uint64_t request_body_hash = 0;
};

/// Fires slot i at start + i*interval by absolute time. A slot whose time has
/// passed by more than interval/10 is skipped, never backfilled.
ScheduleSummary run_schedule(const ProbeConfig& cfg, JsonlLogSink& sink, HttpTransport& transport, Clock& clock,
                             const std::string& api_key,
                             const std::function<void(const std::string&)>& warn = {});

}  // namespace taudit
