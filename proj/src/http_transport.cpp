#include <httplib.h>

#include <chrono>
#include <regex>

#include "taudit/probe.hpp"

namespace taudit {
namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        return {};
    }
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse post(const std::string& url, const std::string& body, const HttpHeaders& headers,
                      Duration timeout) override {
        const auto parts = split_url(url);
        if (parts.origin.empty()) {
            return {0, {}, "unsupported URL: " + url};
        }
        httplib::Client cli(parts.origin);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
        cli.set_connection_timeout(secs.count(), usecs.count());
        cli.set_read_timeout(secs.count(), usecs.count());
        cli.set_write_timeout(secs.count(), usecs.count());

        httplib::Headers hdrs;
        for (const auto& [k, v] : headers) {
            hdrs.emplace(k, v);
        }
        auto res = cli.Post(parts.path, hdrs, body, "application/json");
        if (!res) {
            return {0, {}, httplib::to_string(res.error())};
        }
        return {res->status, res->body, {}};
    }
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport() {
    return std::make_unique<HttplibTransport>();
}

}  // namespace taudit
