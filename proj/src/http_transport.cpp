#include <httplib.h>

#include "arena/gateway.hpp"

namespace arena::gateway {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw GameError(ErrorCode::InvalidConfig, "endpoint must be an absolute URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

Transport http_transport() {
    return [](const std::string& url, const std::string& body, const Headers& headers, double timeout_s) -> HttpResult {
        const SplitUrl target = split_url(url);
        httplib::Client client(target.origin);
        const auto secs = static_cast<time_t>(timeout_s);
        const auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);

        httplib::Headers h;
        std::string content_type = "application/json";
        for (const auto& [k, v] : headers) {
            if (k == "Content-Type") content_type = v;
            else h.emplace(k, v);
        }
        auto res = client.Post(target.path, h, body, content_type);
        if (!res) return {0, {}, httplib::to_string(res.error())};
        return {res->status, res->body, {}};
    };
}

}  // namespace arena::gateway
