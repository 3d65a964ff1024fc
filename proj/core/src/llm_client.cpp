#include "apicompose/llm_client.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "apicompose/error.hpp"
#include "http_transport.hpp"

namespace apicompose {

void validate(const LlmConfig& config) {
    if (config.kind == LlmKind::remote && (!config.base_url || config.base_url->empty())) {
        throw Error(ErrorCode::InvalidArgument, "remote LLM requires base_url");
    }
    if (config.kind == LlmKind::mock && !config.mock_script) {
        throw Error(ErrorCode::InvalidArgument, "mock LLM requires mock_script");
    }
    if (config.temperature < 0.0) throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
    if (config.retries < 0) throw Error(ErrorCode::InvalidArgument, "retries must be >= 0");
    if (config.model_id.empty()) throw Error(ErrorCode::InvalidArgument, "LLM model_id is empty");
}

LlmConfig llm_config_from_json(const Json& j) {
    LlmConfig c;
    try {
        const auto kind = j.value("kind", std::string("remote"));
        if (kind == "remote") {
            c.kind = LlmKind::remote;
        } else if (kind == "mock") {
            c.kind = LlmKind::mock;
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown LLM kind '" + kind + "'");
        }
        if (j.contains("base_url") && !j["base_url"].is_null()) c.base_url = j["base_url"].get<std::string>();
        c.model_id = j.value("model_id", c.kind == LlmKind::mock ? std::string("mock") : std::string());
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.temperature = j.value("temperature", c.temperature);
        c.max_output_tokens = j.value("max_output_tokens", c.max_output_tokens);
        c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
        c.retries = j.value("retries", c.retries);
        c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
        if (j.contains("mock_script")) c.mock_script = j["mock_script"].get<std::vector<std::string>>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad LLM config: ") + e.what());
    }
    validate(c);
    return c;
}

RemoteChatProvider::RemoteChatProvider(LlmConfig config) : config_(std::move(config)) { validate(config_); }

std::string RemoteChatProvider::complete(const std::string& system_text, const std::string& user_text) {
    Json body = Json::object();
    body["model"] = config_.model_id;
    body["messages"] = Json::array({Json{{"role", "system"}, {"content", system_text}},
                                    Json{{"role", "user"}, {"content", user_text}}});
    body["temperature"] = config_.temperature;
    body["max_tokens"] = config_.max_output_tokens;
    const auto response = detail::post_json(*config_.base_url, body.dump(), detail::env_token(config_.api_key_env),
                                            config_.timeout_ms, config_.retries, config_.backoff_base_ms);
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorCode::ProviderError,
                    "HTTP " + std::to_string(response.status) + ": " + detail::snippet(response.body));
    }
    try {
        const auto parsed = Json::parse(response.body);
        const auto& content = parsed.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string() : content.get<std::string>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ProviderError,
                    std::string("unexpected completion response: ") + e.what() + " body: " + detail::snippet(response.body));
    }
}

MockChatProvider::MockChatProvider(std::vector<std::string> script, std::string model_id)
    : script_(std::move(script)), model_id_(std::move(model_id)) {}

std::string MockChatProvider::complete(const std::string& system_text, const std::string& user_text) {
    std::lock_guard lock(mutex_);
    if (next_ >= script_.size()) {
        throw Error(ErrorCode::ScriptExhausted,
                    "mock script has " + std::to_string(script_.size()) + " response(s), all consumed");
    }
    received_.emplace_back(system_text, user_text);
    return script_[next_++];
}

std::size_t MockChatProvider::calls() const {
    std::lock_guard lock(mutex_);
    return next_;
}

std::vector<std::pair<std::string, std::string>> MockChatProvider::received() const {
    std::lock_guard lock(mutex_);
    return received_;
}

std::unique_ptr<ChatProvider> make_chat_provider(const LlmConfig& config) {
    validate(config);
    if (config.kind == LlmKind::mock) return std::make_unique<MockChatProvider>(*config.mock_script, config.model_id);
    return std::make_unique<RemoteChatProvider>(config);
}

Digest256 prompt_digest(const PromptBundle& bundle) {
    std::string material = std::to_string(bundle.system_text.size()) + ":" + bundle.system_text +
                           std::to_string(bundle.user_text.size()) + ":" + bundle.user_text;
    return Digest256::of(material);
}

std::string extract_code_block(const std::string& response_text) {
    const auto open = response_text.find("```");
    if (open == std::string::npos) return response_text;
    const auto line_end = response_text.find('\n', open + 3);
    if (line_end == std::string::npos) {
        const auto close = response_text.find("```", open + 3);
        return response_text.substr(open + 3, close == std::string::npos ? std::string::npos : close - open - 3);
    }
    const auto body_start = line_end + 1;
    const auto close = response_text.find("```", body_start);
    std::string body = response_text.substr(body_start, close == std::string::npos ? std::string::npos : close - body_start);
    if (!body.empty() && body.back() == '\n') body.pop_back();
    if (!body.empty() && body.back() == '\r') body.pop_back();
    return body;
}

bool looks_like_code(const std::string& text) {
    return text.find_first_of("(){}[]=;") != std::string::npos;
}

namespace {

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

CompositionArtifact generate_composition(const PromptBundle& bundle, ChatProvider& provider,
                                         const std::string& runtime_label) {
    auto response = provider.complete(bundle.system_text, bundle.user_text);
    if (is_blank(response)) throw Error(ErrorCode::EmptyCompletion, "model returned an empty completion");

    const bool fenced = response.find("```") != std::string::npos;
    auto code = extract_code_block(response);
    if (is_blank(code) || (!fenced && !looks_like_code(code))) {
        throw Error(ErrorCode::NoCodeFound, "no code in completion; raw response: " + detail::snippet(response, 500));
    }

    CompositionArtifact artifact;
    artifact.code_text = std::move(code);
    artifact.runtime_label = runtime_label;
    artifact.prompt_digest = prompt_digest(bundle);
    artifact.model_id = provider.model_id();
    artifact.created_at = std::chrono::system_clock::now();
    artifact.raw_response = std::move(response);
    return artifact;
}

Json to_json(const CompositionArtifact& artifact) {
    const auto t = std::chrono::system_clock::to_time_t(artifact.created_at);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");

    Json j = Json::object();
    j["code_text"] = artifact.code_text;
    j["runtime_label"] = artifact.runtime_label;
    j["prompt_digest"] = artifact.prompt_digest.hex();
    j["model_id"] = artifact.model_id;
    j["created_at"] = ts.str();
    j["raw_response"] = artifact.raw_response;
    return j;
}

}  // namespace apicompose
