#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "apicompose/chunking.hpp"
#include "apicompose/tokens.hpp"

namespace apicompose {

struct CompositionTask {
    std::string task_text;
    std::string input_schema;   // JSON Schema document text
    std::string output_schema;  // JSON Schema document text
    std::string target_runtime_label = "Python";
};

/// Throws InvalidArgument (empty task) or FormatError (schema text unparseable).
void validate(const CompositionTask& task);

struct PromptBundle {
    std::string template_id;
    std::string system_text;
    std::string user_text;
    std::vector<std::string> included_chunk_ids;
    std::vector<std::string> dropped_chunk_ids;
    std::size_t token_estimate = 0;
    std::size_t budget = 0;

    friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

inline constexpr std::size_t kDefaultPromptBudget = 100000;
inline constexpr const char* kDefaultTemplateId = "cp-v1";

/// Ids of the built-in templates.
std::vector<std::string> prompt_templates();

/// Env var a generated program reads to find a service, e.g. SERVICE_URL_PET_STORE.
std::string service_url_env_var(std::string_view service_id);

/// Renders system/user text with sections in fixed order (task, service
/// documentation, input schema, output schema, output format). Chunks are
/// packed greedily in rank order; one that would overflow the budget is
/// skipped and recorded as dropped, and later chunks may still fit.
///
/// Throws BudgetExceeded when the mandatory sections alone exceed `budget`,
/// InvalidArgument for an unknown template or zero budget.
PromptBundle assemble_prompt(const CompositionTask& task, const std::vector<Chunk>& ranked_chunks,
                             std::size_t budget = kDefaultPromptBudget,
                             const std::string& template_id = kDefaultTemplateId,
                             const TokenCounter& counter = default_token_counter());

Json to_json(const PromptBundle& bundle);
PromptBundle prompt_bundle_from_json(const Json& j);

}  // namespace apicompose
