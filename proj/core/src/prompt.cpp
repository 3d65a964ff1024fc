#include "apicompose/prompt.hpp"

#include "apicompose/error.hpp"

namespace apicompose {

namespace {

constexpr std::string_view kSystemV1 =
    "You are a service composition assistant. You write one complete, executable program that "
    "realizes the user's task by calling the REST endpoints documented in the prompt.\n"
    "Rules:\n"
    "- Call only endpoints that appear in the service documentation.\n"
    "- Read the base URL of each service from the environment variable named in its documentation "
    "heading; never hard-code hosts.\n"
    "- The program receives the path of a JSON input document as its first command-line argument; "
    "the document conforms to the input schema.\n"
    "- Print exactly one JSON document conforming to the output schema to standard output and nothing else.\n";

void append_chunk_block(std::string& out, std::size_t rank, const Chunk& chunk) {
    out += "## [" + std::to_string(rank) + "] " + chunk.chunk_id + " (service `" + chunk.service_id +
           "`, base URL in $" + service_url_env_var(chunk.service_id) + ")\n";
    out += chunk.text;
    if (!chunk.text.empty() && chunk.text.back() != '\n') out += '\n';
    out += '\n';
}

struct UserSections {
    std::string head;  // task + documentation heading
    std::string tail;  // schemas + output format
};

UserSections render_sections(const CompositionTask& task) {
    UserSections s;
    s.head = "# Task\n" + task.task_text + "\n\n# Service documentation\n";
    s.tail = "# Input schema\n" + task.input_schema + "\n\n# Output schema\n" + task.output_schema +
             "\n\n# Output format\nRespond with a single fenced code block in " + task.target_runtime_label +
             ". Do not add explanations outside the code block.\n";
    return s;
}

constexpr std::string_view kNoDocumentation = "(no service documentation retrieved)\n\n";

}  // namespace

void validate(const CompositionTask& task) {
    if (task.task_text.empty()) throw Error(ErrorCode::InvalidArgument, "task text is empty");
    if (task.target_runtime_label.empty()) throw Error(ErrorCode::InvalidArgument, "runtime label is empty");
    for (const auto* schema : {&task.input_schema, &task.output_schema}) {
        try {
            const auto doc = parse_structured_text(*schema);
            if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "schema is not an object");
        } catch (const Error& e) {
            throw Error(ErrorCode::FormatError, "task schema: " + e.detail());
        }
    }
}

std::vector<std::string> prompt_templates() { return {kDefaultTemplateId}; }

std::string service_url_env_var(std::string_view service_id) {
    std::string name = "SERVICE_URL_";
    for (char c : to_upper_ascii(service_id)) {
        name += ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) ? c : '_';
    }
    return name;
}

PromptBundle assemble_prompt(const CompositionTask& task, const std::vector<Chunk>& ranked_chunks,
                             std::size_t budget, const std::string& template_id, const TokenCounter& counter) {
    if (template_id != kDefaultTemplateId) {
        throw Error(ErrorCode::InvalidArgument, "unknown prompt template '" + template_id + "'");
    }
    if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
    validate(task);

    PromptBundle bundle;
    bundle.template_id = template_id;
    bundle.budget = budget;
    bundle.system_text = std::string(kSystemV1);
    const auto sections = render_sections(task);
    const auto system_tokens = counter(bundle.system_text);

    auto estimate = [&](const std::string& docs) {
        return system_tokens + counter(sections.head + (docs.empty() ? std::string(kNoDocumentation) : docs) +
                                       sections.tail);
    };

    const auto mandatory = estimate({});
    if (mandatory > budget) {
        throw Error(ErrorCode::BudgetExceeded, "mandatory prompt sections need " + std::to_string(mandatory) +
                                                   " tokens, budget is " + std::to_string(budget));
    }

    std::string docs;
    for (const auto& chunk : ranked_chunks) {
        std::string trial = docs;
        append_chunk_block(trial, bundle.included_chunk_ids.size() + 1, chunk);
        if (estimate(trial) <= budget) {
            docs = std::move(trial);
            bundle.included_chunk_ids.push_back(chunk.chunk_id);
        } else {
            bundle.dropped_chunk_ids.push_back(chunk.chunk_id);
        }
    }
    bundle.user_text = sections.head + (docs.empty() ? std::string(kNoDocumentation) : docs) + sections.tail;
    bundle.token_estimate = system_tokens + counter(bundle.user_text);
    return bundle;
}

Json to_json(const PromptBundle& bundle) {
    Json j = Json::object();
    j["template_id"] = bundle.template_id;
    j["system_text"] = bundle.system_text;
    j["user_text"] = bundle.user_text;
    j["included_chunk_ids"] = bundle.included_chunk_ids;
    j["dropped_chunk_ids"] = bundle.dropped_chunk_ids;
    j["token_estimate"] = bundle.token_estimate;
    j["budget"] = bundle.budget;
    return j;
}

PromptBundle prompt_bundle_from_json(const Json& j) {
    try {
        PromptBundle b;
        b.template_id = j.value("template_id", std::string(kDefaultTemplateId));
        b.system_text = j.at("system_text").get<std::string>();
        b.user_text = j.at("user_text").get<std::string>();
        b.included_chunk_ids = j.value("included_chunk_ids", std::vector<std::string>{});
        b.dropped_chunk_ids = j.value("dropped_chunk_ids", std::vector<std::string>{});
        b.token_estimate = j.value("token_estimate", std::size_t{0});
        b.budget = j.value("budget", std::size_t{0});
        return b;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, std::string("bad prompt bundle: ") + e.what());
    }
}

}  // namespace apicompose
