#include "apicompose/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "apicompose/error.hpp"
#include "apicompose/prompt.hpp"
#include "path_template.hpp"

namespace apicompose {

// ---------------------------------------------------------------------------
// Example synthesis and conformance

namespace {

Json synthesize_at(const SchemaNode& schema, int depth) {
    if (schema.cycle_marker) return nullptr;
    if (schema.example) return *schema.example;
    if (schema.enum_values && !schema.enum_values->empty()) return schema.enum_values->front();
    switch (schema.kind) {
        case SchemaKind::string: return "string";
        case SchemaKind::integer: return 0;
        case SchemaKind::number: return 0.0;
        case SchemaKind::boolean: return false;
        case SchemaKind::array: return Json::array();
        case SchemaKind::null:
        case SchemaKind::any: return nullptr;
        case SchemaKind::composite:
            return schema.composite_of.empty() ? Json(nullptr) : synthesize_at(schema.composite_of.front(), depth);
        case SchemaKind::object: {
            Json obj = Json::object();
            if (depth >= kExampleDepthCap) return obj;
            for (const auto& [name, prop] : schema.properties) {
                if (schema.required.count(name)) obj[name] = synthesize_at(prop, depth + 1);
            }
            return obj;
        }
    }
    return nullptr;
}

bool fail(std::string* why, const std::string& where, const std::string& what) {
    if (why) *why = (where.empty() ? std::string("$") : where) + ": " + what;
    return false;
}

bool conforms_at(const Json& value, const SchemaNode& schema, const std::string& where, std::string* why) {
    if (schema.cycle_marker) return true;
    switch (schema.kind) {
        case SchemaKind::any: return true;
        case SchemaKind::null: return value.is_null() || fail(why, where, "expected null");
        case SchemaKind::string: return value.is_string() || fail(why, where, "expected string");
        case SchemaKind::boolean: return value.is_boolean() || fail(why, where, "expected boolean");
        case SchemaKind::number: return value.is_number() || fail(why, where, "expected number");
        case SchemaKind::integer: {
            if (value.is_number_integer()) return true;
            if (value.is_number_float()) {
                const double d = value.get<double>();
                if (std::isfinite(d) && std::floor(d) == d) return true;
            }
            return fail(why, where, "expected integer");
        }
        case SchemaKind::array: {
            if (!value.is_array()) return fail(why, where, "expected array");
            if (!schema.items) return true;
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (!conforms_at(value[i], *schema.items, where + "[" + std::to_string(i) + "]", why)) return false;
            }
            return true;
        }
        case SchemaKind::object: {
            if (!value.is_object()) return fail(why, where, "expected object");
            for (const auto& r : schema.required) {
                if (!value.contains(r)) return fail(why, where, "missing required property '" + r + "'");
            }
            for (const auto& [name, prop] : schema.properties) {
                if (auto it = value.find(name); it != value.end()) {
                    if (!conforms_at(*it, prop, where + "." + name, why)) return false;
                }
            }
            return true;
        }
        case SchemaKind::composite: {
            if (schema.composite_of.empty()) return true;
            for (const auto& alt : schema.composite_of) {
                if (conforms_at(value, alt, where, nullptr)) return true;
            }
            return fail(why, where, "matches no alternative");
        }
    }
    return true;
}

}  // namespace

Json synthesize_example(const SchemaNode& schema) { return synthesize_at(schema, 0); }

bool conforms(const Json& value, const SchemaNode& schema, std::string* why) {
    return conforms_at(value, schema, "", why);
}

// ---------------------------------------------------------------------------
// Request matching

std::optional<std::string> match_request(const ServiceSpec& spec, HttpMethod method, std::string_view concrete_path) {
    const auto segments = detail::split_concrete_path(concrete_path);
    const Endpoint* best = nullptr;
    int best_literals = -1;
    for (const auto& ep : spec.endpoints) {
        if (ep.method != method) continue;
        const detail::PathTemplate tmpl(ep.path);
        if (!tmpl.matches(segments)) continue;
        const int literals = tmpl.literal_segments();
        if (literals > best_literals || (literals == best_literals && ep.endpoint_id < best->endpoint_id)) {
            best = &ep;
            best_literals = literals;
        }
    }
    if (!best) return std::nullopt;
    return best->endpoint_id;
}

std::optional<std::string> match_request(const ServiceSpec& spec, std::string_view method,
                                         std::string_view concrete_path) {
    const auto parsed = parse_http_method(method);
    if (!parsed) return std::nullopt;
    return match_request(spec, *parsed, concrete_path);
}

// ---------------------------------------------------------------------------
// Static scan

namespace {

struct Literal {
    std::size_t start;  // position of the opening quote
    std::string text;
};

std::vector<Literal> string_literals(std::string_view code) {
    std::vector<Literal> out;
    std::size_t i = 0;
    while (i < code.size()) {
        const char q = code[i];
        if (q != '"' && q != '\'') {
            ++i;
            continue;
        }
        std::string text;
        std::size_t j = i + 1;
        bool closed = false;
        while (j < code.size() && code[j] != '\n') {
            if (code[j] == '\\' && j + 1 < code.size()) {
                text.push_back(code[j + 1]);
                j += 2;
                continue;
            }
            if (code[j] == q) {
                closed = true;
                break;
            }
            text.push_back(code[j]);
            ++j;
        }
        if (closed) {
            out.push_back({i, std::move(text)});
            i = j + 1;
        } else {
            i = j;  // unterminated on this line
        }
    }
    return out;
}

// Path part of a literal, or nullopt when it does not look like a path/URL.
std::optional<std::string> literal_path(const std::string& literal) {
    std::string s = literal;
    if (auto scheme = s.find("://"); scheme != std::string::npos) {
        auto slash = s.find('/', scheme + 3);
        s = slash == std::string::npos ? std::string("/") : s.substr(slash);
    } else if (!s.empty() && s.front() != '/') {
        // Interpolated base URL: "{base}/x", "${BASE}/x", "%s/x".
        std::size_t prefix_end = std::string::npos;
        if (s.front() == '{') {
            prefix_end = s.find('}');
        } else if (s.rfind("${", 0) == 0) {
            prefix_end = s.find('}');
        } else if (s.rfind("%s", 0) == 0) {
            prefix_end = 1;
        }
        if (prefix_end == std::string::npos || prefix_end + 1 >= s.size() || s[prefix_end + 1] != '/') {
            return std::nullopt;
        }
        s = s.substr(prefix_end + 1);
    }
    if (s.empty() || s.front() != '/') return std::nullopt;
    if (auto q = s.find_first_of("?#"); q != std::string::npos) s.resize(q);
    return s;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::optional<HttpMethod> nearest_method_before(std::string_view code, std::size_t literal_start) {
    const auto window_start = literal_start > 64 ? literal_start - 64 : 0;
    const auto window = to_lower_ascii(code.substr(window_start, literal_start - window_start));
    std::optional<HttpMethod> found;
    std::size_t found_at = 0;
    for (const char* word : {"get", "post", "put", "patch", "delete"}) {
        const std::string_view w(word);
        std::size_t pos = 0;
        while ((pos = window.find(w, pos)) != std::string::npos) {
            const bool left_ok = pos == 0 ? (window_start == 0 || !is_word_char(code[window_start - 1]))
                                          : !is_word_char(window[pos - 1]);
            const auto end = pos + w.size();
            const bool right_ok = end >= window.size() || !is_word_char(window[end]);
            if (left_ok && right_ok && (!found || pos >= found_at)) {
                found = parse_http_method(w);
                found_at = pos;
            }
            pos = end;
        }
    }
    return found;
}

}  // namespace

std::set<std::string> static_endpoint_scan(std::string_view code_text, const std::vector<ServiceSpec>& specs) {
    struct Candidate {
        detail::PathTemplate tmpl;
        const Endpoint* endpoint;
    };
    std::vector<Candidate> candidates;
    for (const auto& s : specs) {
        for (const auto& ep : s.endpoints) candidates.push_back({detail::PathTemplate(ep.path), &ep});
    }

    std::set<std::string> refs;
    for (const auto& lit : string_literals(code_text)) {
        auto path = literal_path(lit.text);
        if (!path) continue;
        auto segments = detail::split_concrete_path(*path);
        // "/pets/" + id: treat the empty tail as an unknown value.
        if (path->size() > 1 && path->back() == '/') segments.back() = detail::kWildcardSegment;

        int best_literals = -1;
        std::string best_path;
        for (const auto& c : candidates) {
            if (!c.tmpl.matches(segments)) continue;
            const int literals = c.tmpl.literal_segments();
            if (literals > best_literals || (literals == best_literals && c.endpoint->path < best_path)) {
                best_literals = literals;
                best_path = c.endpoint->path;
            }
        }
        if (best_literals < 0) continue;
        const auto method = nearest_method_before(code_text, lit.start);
        for (const auto& c : candidates) {
            if (c.endpoint->path != best_path) continue;
            if (method && c.endpoint->method != *method) continue;
            refs.insert(c.endpoint->endpoint_id);
        }
    }
    return refs;
}

// ---------------------------------------------------------------------------
// Scoring

std::pair<int, const SchemaNode*> success_response(const Endpoint& endpoint) {
    static const SchemaNode kAny{};
    std::optional<int> best;
    const SchemaNode* schema = nullptr;
    for (const auto& [status, node] : endpoint.response_schemas) {
        int code = 0;
        if (status.size() == 3 && status[0] == '2' && std::isdigit(static_cast<unsigned char>(status[1])) &&
            std::isdigit(static_cast<unsigned char>(status[2]))) {
            code = std::stoi(status);
        } else if (status == "2XX" || status == "2xx") {
            code = 200;
        } else {
            continue;
        }
        if (!best || code < *best) {
            best = code;
            schema = &node;
        }
    }
    if (best) return {*best, schema};
    if (auto it = endpoint.response_schemas.find("default"); it != endpoint.response_schemas.end()) {
        return {200, &it->second};
    }
    return {200, &kAny};
}

Json to_json(const InvocationRecord& r) {
    Json j = Json::object();
    j["seq"] = r.seq;
    j["method"] = r.method;
    j["concrete_path"] = r.concrete_path;
    if (!r.query.empty()) j["query"] = r.query;
    j["matched_endpoint_id"] = r.matched_endpoint_id ? Json(*r.matched_endpoint_id) : Json(nullptr);
    j["status_returned"] = r.status_returned;
    return j;
}

Json to_json(const ValidationReport& r) {
    auto set_json = [](const std::set<std::string>& s) { return Json(std::vector<std::string>(s.begin(), s.end())); };
    Json j = Json::object();
    j["expected_endpoint_ids"] = r.expected_endpoint_ids;
    j["static_refs"] = set_json(r.static_refs);
    j["static_coverage"] = r.static_coverage;
    j["invoked_endpoint_ids"] = r.invoked_endpoint_ids ? set_json(*r.invoked_endpoint_ids) : Json(nullptr);
    j["dynamic_coverage"] = r.dynamic_coverage ? Json(*r.dynamic_coverage) : Json(nullptr);
    j["extraneous_invocations"] = r.extraneous_invocations ? set_json(*r.extraneous_invocations) : Json(nullptr);
    j["unmatched_requests"] = r.unmatched_requests;
    j["output_schema_valid"] = r.output_schema_valid ? Json(*r.output_schema_valid) : Json(nullptr);
    j["exit_status"] = r.exit_status ? Json(*r.exit_status) : Json(nullptr);
    j["runner_error"] = r.runner_error ? Json(*r.runner_error) : Json(nullptr);
    if (!r.runner_stderr.empty()) j["runner_stderr"] = r.runner_stderr;
    return j;
}

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string extension_for(const std::string& runtime_label) {
    const auto label = to_lower_ascii(runtime_label);
    if (label.rfind("python", 0) == 0) return ".py";
    if (label == "javascript" || label == "node" || label == "nodejs") return ".js";
    if (label == "bash" || label == "sh" || label == "shell") return ".sh";
    return ".txt";
}

double coverage(const std::vector<std::string>& expected, const std::set<std::string>& found) {
    std::size_t hit = 0;
    for (const auto& e : expected) hit += found.count(e);
    return static_cast<double>(hit) / static_cast<double>(expected.size());
}

class TempDir {
public:
    TempDir() {
        auto pattern = (std::filesystem::temp_directory_path() / "apicompose-run-XXXXXX").string();
        if (!::mkdtemp(pattern.data())) throw Error(ErrorCode::IoError, "cannot create temp directory");
        path_ = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace

ValidationReport run_and_score(const CompositionArtifact& artifact, const ScoreRequest& request) {
    if (request.runner_command.find("{code_file}") == std::string::npos ||
        request.runner_command.find("{input_file}") == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "runner command needs {code_file} and {input_file} placeholders");
    }
    if (request.expected_endpoint_ids.empty()) {
        throw Error(ErrorCode::InvalidArgument, "expected endpoint set is empty");
    }

    ValidationReport report;
    report.expected_endpoint_ids = request.expected_endpoint_ids;
    std::vector<ServiceSpec> specs;
    for (const auto* m : request.mocks) specs.push_back(m->spec());
    report.static_refs = static_endpoint_scan(artifact.code_text, specs);
    report.static_coverage = coverage(request.expected_endpoint_ids, report.static_refs);

    TempDir dir;
    const auto code_file = dir.path() / ("composition" + extension_for(artifact.runtime_label));
    const auto input_file = dir.path() / "input.json";
    atomic_write_file(code_file, artifact.code_text);
    atomic_write_file(input_file, request.input_document.dump(2));

    auto command = request.runner_command;
    replace_all(command, "{code_file}", shell_quote(code_file.string()));
    replace_all(command, "{input_file}", shell_quote(input_file.string()));

    std::vector<std::pair<std::string, std::string>> env;
    std::vector<std::size_t> log_start;
    for (const auto* m : request.mocks) {
        env.emplace_back(service_url_env_var(m->spec().service_id), m->base_url());
        log_start.push_back(m->log_size());
    }

    ProcessResult result;
    try {
        result = run_process(command, env, request.timeout);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RunnerSpawnError) throw;
        report.runner_error = std::string(error_code_name(e.code()));
        report.runner_stderr = e.detail();
        return report;
    }
    report.runner_stderr = result.stderr_text.size() > 2000 ? result.stderr_text.substr(0, 2000) : result.stderr_text;
    if (result.timed_out) {
        report.runner_error = std::string(error_code_name(ErrorCode::RunnerTimeout));
        return report;
    }
    report.exit_status = result.exit_status;

    std::set<std::string> invoked;
    for (std::size_t i = 0; i < request.mocks.size(); ++i) {
        const auto records = request.mocks[i]->log();
        for (std::size_t r = log_start[i]; r < records.size(); ++r) {
            if (records[r].matched_endpoint_id) {
                invoked.insert(*records[r].matched_endpoint_id);
            } else {
                ++report.unmatched_requests;
            }
        }
    }
    std::set<std::string> extraneous;
    const std::set<std::string> expected(request.expected_endpoint_ids.begin(), request.expected_endpoint_ids.end());
    for (const auto& id : invoked) {
        if (!expected.count(id)) extraneous.insert(id);
    }
    report.dynamic_coverage = coverage(request.expected_endpoint_ids, invoked);
    report.invoked_endpoint_ids = std::move(invoked);
    report.extraneous_invocations = std::move(extraneous);

    try {
        const auto output = Json::parse(result.stdout_text);
        report.output_schema_valid = conforms(output, request.output_schema);
    } catch (const Json::exception&) {
        report.output_schema_valid = false;
    }
    return report;
}

}  // namespace apicompose
