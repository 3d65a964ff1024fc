#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "apicompose/llm_client.hpp"
#include "apicompose/spec_model.hpp"

namespace apicompose {

/// Object synthesis stops recursing below this depth.
inline constexpr int kExampleDepthCap = 8;

/// Example value for a resolved schema: explicit example, else first enum
/// value, else a type default ("string", 0, 0.0, false, [], required
/// properties only for objects, null at cycle cuts, first alternative of a
/// composite).
Json synthesize_example(const SchemaNode& schema);

/// Recursive type/required check. On failure `why` (if given) names the first
/// offending location.
bool conforms(const Json& value, const SchemaNode& schema, std::string* why = nullptr);

/// Segment-wise template match. Literal segments must be equal and `{var}`
/// matches one non-empty segment; more literal segments win, then the
/// lexicographically smaller endpoint id.
std::optional<std::string> match_request(const ServiceSpec& spec, HttpMethod method, std::string_view concrete_path);
/// Same, for a method given as text; unknown methods never match.
std::optional<std::string> match_request(const ServiceSpec& spec, std::string_view method,
                                         std::string_view concrete_path);

/// Endpoint ids referenced by path-like string literals in `code_text`. A
/// method word (get/post/put/patch/delete) within 64 characters before a
/// literal narrows its matches to that method.
std::set<std::string> static_endpoint_scan(std::string_view code_text, const std::vector<ServiceSpec>& specs);

struct InvocationRecord {
    std::size_t seq = 0;
    std::string method;
    std::string concrete_path;
    std::string query;
    std::string body;
    std::optional<std::string> matched_endpoint_id;
    int status_returned = 0;
    std::chrono::steady_clock::time_point timestamp;
};

Json to_json(const InvocationRecord& record);

/// Invocation-tracking HTTP mock of one service. Matched requests get the
/// lowest declared 2xx status (200 if none) with a synthesized JSON body;
/// everything else gets 404. Every request is logged with a sequence number
/// assigned in arrival order.
class MockService {
public:
    /// Port 0 binds an ephemeral port. Throws BindError.
    static std::unique_ptr<MockService> start(ServiceSpec spec, const std::string& host = "127.0.0.1",
                                              int port = 0);
    ~MockService();

    MockService(const MockService&) = delete;
    MockService& operator=(const MockService&) = delete;

    const std::string& base_url() const;
    int port() const;
    const ServiceSpec& spec() const;

    std::vector<InvocationRecord> log() const;
    std::size_t log_size() const;

    /// The status and body served for an endpoint.
    std::pair<int, Json> canned_response(const std::string& endpoint_id) const;

    void stop();

private:
    struct Impl;
    explicit MockService(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

/// Status a mock serves for an endpoint, and the schema its body follows.
std::pair<int, const SchemaNode*> success_response(const Endpoint& endpoint);

struct ValidationReport {
    std::vector<std::string> expected_endpoint_ids;
    std::set<std::string> static_refs;
    double static_coverage = 0.0;
    std::optional<std::set<std::string>> invoked_endpoint_ids;
    std::optional<double> dynamic_coverage;
    std::optional<std::set<std::string>> extraneous_invocations;
    std::size_t unmatched_requests = 0;
    std::optional<bool> output_schema_valid;
    std::optional<int> exit_status;
    std::optional<std::string> runner_error;  // "RunnerTimeout" / "RunnerSpawnError"
    std::string runner_stderr;
};

Json to_json(const ValidationReport& report);

struct ProcessResult {
    std::optional<int> exit_status;
    std::string stdout_text;
    std::string stderr_text;
    bool timed_out = false;
};

/// Runs `command` via /bin/sh -c in its own process group with extra
/// environment variables; the group is killed when `timeout` elapses.
/// Throws RunnerSpawnError.
ProcessResult run_process(const std::string& command, const std::vector<std::pair<std::string, std::string>>& env,
                          std::chrono::milliseconds timeout);

inline constexpr std::chrono::milliseconds kDefaultRunnerTimeout{30000};

struct ScoreRequest {
    std::string runner_command;  // must contain {code_file} and {input_file}
    std::vector<const MockService*> mocks;
    Json input_document;
    std::vector<std::string> expected_endpoint_ids;
    SchemaNode output_schema;
    std::chrono::milliseconds timeout = kDefaultRunnerTimeout;
};

/// Writes the code and input to a temp dir, runs the runner with
/// SERVICE_URL_<ID> variables pointing at the mocks, and scores static
/// references, mock invocations and stdout against the output schema.
/// Runner timeouts and spawn failures are reported in `runner_error` with the
/// dynamic fields left empty. Throws InvalidArgument for a bad request.
ValidationReport run_and_score(const CompositionArtifact& artifact, const ScoreRequest& request);

}  // namespace apicompose
