#pragma once

#include <optional>
#include <string>

namespace apicompose::detail {

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// POSTs a JSON body. Transport failures are retried up to `retries` times
/// with exponential backoff (base, x2); exhaustion throws ProviderUnreachable.
/// Any HTTP status is returned to the caller.
HttpResponse post_json(const std::string& url, const std::string& body,
                       const std::optional<std::string>& bearer_token, int timeout_ms, int retries,
                       int backoff_base_ms);

/// Reads the named environment variable; empty or unset yields nullopt.
std::optional<std::string> env_token(const std::string& name);

std::string snippet(const std::string& body, std::size_t limit = 200);

}  // namespace apicompose::detail
