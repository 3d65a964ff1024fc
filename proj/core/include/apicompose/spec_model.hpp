#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apicompose/util.hpp"

namespace apicompose {

using Json = nlohmann::ordered_json;

enum class SchemaKind { object, array, string, number, integer, boolean, null, any, composite };

std::string_view to_string(SchemaKind kind) noexcept;

/// One node of a (possibly still unresolved) schema tree.
///
/// Before resolution a node may carry `ref` (a `$ref` target) or `all_of`
/// members. After resolve_refs neither remains; reference cycles are cut
/// with a node of kind `any` whose `cycle_marker` names the reference.
struct SchemaNode {
    SchemaKind kind = SchemaKind::any;
    std::vector<std::pair<std::string, SchemaNode>> properties;  // document order
    std::shared_ptr<const SchemaNode> items;
    std::set<std::string> required;
    std::optional<std::string> description;
    std::optional<Json> example;
    std::optional<std::vector<Json>> enum_values;
    std::vector<SchemaNode> composite_of;  // anyOf / oneOf alternatives
    std::optional<std::string> cycle_marker;

    std::optional<std::string> ref;  // unresolved only
    std::vector<SchemaNode> all_of;  // unresolved only

    const SchemaNode* property(std::string_view name) const;
    bool is_resolved() const;

    friend bool operator==(const SchemaNode& a, const SchemaNode& b);
};

enum class HttpMethod { GET, POST, PUT, PATCH, DELETE, HEAD, OPTIONS };

std::string_view to_string(HttpMethod method) noexcept;
/// Case-insensitive. Returns nullopt for anything outside the closed set.
std::optional<HttpMethod> parse_http_method(std::string_view text) noexcept;

enum class ParameterLocation { path, query, header, body_field };

std::string_view to_string(ParameterLocation location) noexcept;

struct Parameter {
    std::string name;
    ParameterLocation location = ParameterLocation::query;
    SchemaNode schema;
    bool required = false;

    friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct Endpoint {
    std::string endpoint_id;  // "METHOD /path/template"
    HttpMethod method = HttpMethod::GET;
    std::string path;
    std::optional<std::string> summary;
    std::optional<std::string> description;
    std::vector<Parameter> parameters;
    std::optional<SchemaNode> request_schema;
    std::map<std::string, SchemaNode> response_schemas;  // status code -> schema
    std::vector<std::string> tags;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

std::string make_endpoint_id(HttpMethod method, std::string_view path);

/// True when `id` has the "METHOD /path" shape with a known method.
bool is_endpoint_id(std::string_view id);

struct ServiceSpec {
    std::string service_id;
    std::string title;
    std::string version;
    std::optional<std::string> description;
    std::vector<std::string> base_urls;
    std::vector<Endpoint> endpoints;
    Digest256 source_digest;

    /// components.schemas, kept for reference resolution.
    std::vector<std::pair<std::string, SchemaNode>> component_schemas;

    const Endpoint* find_endpoint(std::string_view endpoint_id) const;

    friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

enum class FormatHint { json, yaml, auto_detect };

struct ParseOptions {
    FormatHint format = FormatHint::auto_detect;
    std::optional<std::string> service_id;  // overrides the title-derived slug
};

/// Parses an OpenAPI 3.0/3.1 document. `$ref`s inside schemas stay unresolved;
/// references to components.parameters / requestBodies / responses are
/// followed immediately.
///
/// Throws MalformedDocument, UnsupportedVersion, DuplicateEndpoint or
/// DanglingReference (for non-schema component references).
ServiceSpec parse_spec(std::string_view document_text, const ParseOptions& options = {});

/// Maximum nesting of reference expansions before DepthExceeded.
inline constexpr int kMaxRefDepth = 32;

/// Inlines every schema `$ref`, merges allOf, and cuts cycles. Idempotent.
/// Throws DanglingReference or DepthExceeded.
ServiceSpec resolve_refs(const ServiceSpec& spec);

/// parse_spec + resolve_refs on a file.
ServiceSpec load_spec_file(const std::filesystem::path& path, const ParseOptions& options = {});

std::vector<std::string> list_endpoints(const ServiceSpec& spec);

/// Rewrites colliding service ids with numeric suffixes ("-2", "-3", ...),
/// keeping the first occurrence unchanged.
void assign_unique_service_ids(std::vector<ServiceSpec>& specs);

/// Converts a parsed document or schema JSON to a structured model. Used for
/// standalone JSON Schema documents (composition I/O schemas). Local refs into
/// `$defs`, `definitions` and `components/schemas` are resolved.
SchemaNode parse_schema_document(const Json& document);

/// Emits a resolved schema node as JSON Schema.
Json schema_to_json(const SchemaNode& schema);

/// Converts JSON or YAML text to JSON. Throws MalformedDocument.
Json parse_structured_text(std::string_view text, FormatHint format = FormatHint::auto_detect);

}  // namespace apicompose
