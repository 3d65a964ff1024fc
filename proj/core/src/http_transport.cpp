#include "http_transport.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "apicompose/error.hpp"

namespace apicompose::detail {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "URL '" + url + "' has no scheme");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse post_json(const std::string& url, const std::string& body,
                       const std::optional<std::string>& bearer_token, int timeout_ms, int retries,
                       int backoff_base_ms) {
    const auto target = split_url(url);
    httplib::Headers headers;
    if (bearer_token) headers.emplace("Authorization", "Bearer " + *bearer_token);

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = static_cast<long long>(backoff_base_ms) << (attempt - 1);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        httplib::Client client(target.origin);
        const auto timeout = std::chrono::milliseconds(timeout_ms);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        auto res = client.Post(target.path, headers, body, "application/json");
        if (res) return {res->status, res->body};
        last_error = httplib::to_string(res.error());
    }
    throw Error(ErrorCode::ProviderUnreachable,
                url + " after " + std::to_string(retries + 1) + " attempt(s): " + last_error);
}

std::optional<std::string> env_token(const std::string& name) {
    if (name.empty()) return std::nullopt;
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

std::string snippet(const std::string& body, std::size_t limit) {
    if (body.size() <= limit) return body;
    return body.substr(0, limit) + "...";
}

}  // namespace apicompose::detail
