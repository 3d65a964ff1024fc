#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "apicompose/prompt.hpp"
#include "apicompose/util.hpp"

namespace apicompose {

enum class LlmKind { remote, mock };

struct LlmConfig {
    LlmKind kind = LlmKind::mock;
    std::optional<std::string> base_url;  // full chat-completions URL
    std::string model_id = "mock";
    std::string api_key_env = "APICOMPOSE_LLM_API_KEY";
    double temperature = 0.0;
    int max_output_tokens = 4096;
    int timeout_ms = 120000;
    int retries = 2;
    int backoff_base_ms = 500;
    std::optional<std::vector<std::string>> mock_script;
};

/// Throws InvalidArgument.
void validate(const LlmConfig& config);
LlmConfig llm_config_from_json(const Json& j);

/// One chat completion: system + user message in, assistant text out.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string complete(const std::string& system_text, const std::string& user_text) = 0;
    virtual const std::string& model_id() const = 0;
};

/// POST {model, messages, temperature, max_tokens}; reads choices[0].message.content.
class RemoteChatProvider final : public ChatProvider {
public:
    explicit RemoteChatProvider(LlmConfig config);
    std::string complete(const std::string& system_text, const std::string& user_text) override;
    const std::string& model_id() const override { return config_.model_id; }

private:
    LlmConfig config_;
};

/// Replays canned responses in order; throws ScriptExhausted afterwards.
class MockChatProvider final : public ChatProvider {
public:
    explicit MockChatProvider(std::vector<std::string> script, std::string model_id = "mock");
    std::string complete(const std::string& system_text, const std::string& user_text) override;
    const std::string& model_id() const override { return model_id_; }

    std::size_t calls() const;
    /// Prompts received so far, for assertions.
    std::vector<std::pair<std::string, std::string>> received() const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> script_;
    std::size_t next_ = 0;
    std::string model_id_;
    std::vector<std::pair<std::string, std::string>> received_;
};

std::unique_ptr<ChatProvider> make_chat_provider(const LlmConfig& config);

struct CompositionArtifact {
    std::string code_text;
    std::string runtime_label;
    Digest256 prompt_digest;
    std::string model_id;
    std::chrono::system_clock::time_point created_at;
    std::string raw_response;
};

/// Hash over system_text and user_text, length-prefixed so the split is unambiguous.
Digest256 prompt_digest(const PromptBundle& bundle);

/// Contents of the first ``` fenced block (fence-line language tag ignored);
/// the whole text when no fence exists.
std::string extract_code_block(const std::string& response_text);

/// Heuristic used when a response carries no fence: does it look like source code at all?
bool looks_like_code(const std::string& text);

/// Throws ProviderUnreachable, ProviderError, EmptyCompletion or NoCodeFound.
CompositionArtifact generate_composition(const PromptBundle& bundle, ChatProvider& provider,
                                         const std::string& runtime_label);

Json to_json(const CompositionArtifact& artifact);

}  // namespace apicompose
