#include "apicompose/spec_model.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <regex>
#include <unordered_map>

#include "apicompose/error.hpp"

namespace apicompose {

// ---------------------------------------------------------------------------
// Basic enums

std::string_view to_string(SchemaKind kind) noexcept {
    switch (kind) {
        case SchemaKind::object: return "object";
        case SchemaKind::array: return "array";
        case SchemaKind::string: return "string";
        case SchemaKind::number: return "number";
        case SchemaKind::integer: return "integer";
        case SchemaKind::boolean: return "boolean";
        case SchemaKind::null: return "null";
        case SchemaKind::any: return "any";
        case SchemaKind::composite: return "composite";
    }
    return "any";
}

std::string_view to_string(HttpMethod method) noexcept {
    switch (method) {
        case HttpMethod::GET: return "GET";
        case HttpMethod::POST: return "POST";
        case HttpMethod::PUT: return "PUT";
        case HttpMethod::PATCH: return "PATCH";
        case HttpMethod::DELETE: return "DELETE";
        case HttpMethod::HEAD: return "HEAD";
        case HttpMethod::OPTIONS: return "OPTIONS";
    }
    return "GET";
}

std::optional<HttpMethod> parse_http_method(std::string_view text) noexcept {
    const auto upper = to_upper_ascii(text);
    if (upper == "GET") return HttpMethod::GET;
    if (upper == "POST") return HttpMethod::POST;
    if (upper == "PUT") return HttpMethod::PUT;
    if (upper == "PATCH") return HttpMethod::PATCH;
    if (upper == "DELETE") return HttpMethod::DELETE;
    if (upper == "HEAD") return HttpMethod::HEAD;
    if (upper == "OPTIONS") return HttpMethod::OPTIONS;
    return std::nullopt;
}

std::string_view to_string(ParameterLocation location) noexcept {
    switch (location) {
        case ParameterLocation::path: return "path";
        case ParameterLocation::query: return "query";
        case ParameterLocation::header: return "header";
        case ParameterLocation::body_field: return "body-field";
    }
    return "query";
}

std::string make_endpoint_id(HttpMethod method, std::string_view path) {
    std::string id(to_string(method));
    id.push_back(' ');
    id.append(path);
    return id;
}

bool is_endpoint_id(std::string_view id) {
    const auto space = id.find(' ');
    if (space == std::string_view::npos) return false;
    const auto method = id.substr(0, space);
    if (!parse_http_method(method) || to_upper_ascii(method) != method) return false;
    const auto path = id.substr(space + 1);
    return !path.empty() && path.front() == '/' && path.find(' ') == std::string_view::npos;
}

const SchemaNode* SchemaNode::property(std::string_view name) const {
    for (const auto& [key, node] : properties) {
        if (key == name) return &node;
    }
    return nullptr;
}

bool SchemaNode::is_resolved() const {
    if (ref || !all_of.empty()) return false;
    if (items && !items->is_resolved()) return false;
    for (const auto& [_, p] : properties) {
        if (!p.is_resolved()) return false;
    }
    return std::all_of(composite_of.begin(), composite_of.end(),
                       [](const SchemaNode& n) { return n.is_resolved(); });
}

bool operator==(const SchemaNode& a, const SchemaNode& b) {
    const bool items_equal =
        (!a.items && !b.items) || (a.items && b.items && *a.items == *b.items);
    return items_equal && a.kind == b.kind && a.properties == b.properties &&
           a.required == b.required && a.description == b.description &&
           a.example == b.example && a.enum_values == b.enum_values &&
           a.composite_of == b.composite_of && a.cycle_marker == b.cycle_marker &&
           a.ref == b.ref && a.all_of == b.all_of;
}

const Endpoint* ServiceSpec::find_endpoint(std::string_view endpoint_id) const {
    for (const auto& ep : endpoints) {
        if (ep.endpoint_id == endpoint_id) return &ep;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// JSON / YAML text

namespace {

using KeyPath = std::vector<std::string>;

std::string join_path(const KeyPath& path) {
    std::string s;
    for (const auto& p : path) {
        s += '/';
        s += p;
    }
    return s;
}

struct JsonFrame {
    bool is_object = false;
    std::string name;
    std::set<std::string> keys;
    std::string last_key;
};

Json parse_json_tracking(std::string_view text, std::vector<KeyPath>& duplicates) {
    std::vector<JsonFrame> stack;
    auto current_path = [&stack] {
        KeyPath p;
        for (std::size_t i = 1; i < stack.size(); ++i) p.push_back(stack[i].name);
        return p;
    };
    auto child_name = [&stack]() -> std::string {
        if (stack.empty()) return {};
        return stack.back().is_object ? stack.back().last_key : std::string("[]");
    };
    Json::parser_callback_t cb = [&](int, Json::parse_event_t event, Json& parsed) {
        switch (event) {
            case Json::parse_event_t::object_start:
                stack.push_back({true, child_name(), {}, {}});
                break;
            case Json::parse_event_t::array_start:
                stack.push_back({false, child_name(), {}, {}});
                break;
            case Json::parse_event_t::object_end:
            case Json::parse_event_t::array_end:
                if (!stack.empty()) stack.pop_back();
                break;
            case Json::parse_event_t::key: {
                auto key = parsed.get<std::string>();
                auto& top = stack.back();
                if (!top.keys.insert(key).second) {
                    auto p = current_path();
                    p.push_back(key);
                    duplicates.push_back(std::move(p));
                }
                top.last_key = std::move(key);
                break;
            }
            case Json::parse_event_t::value:
                break;
        }
        return true;
    };
    return Json::parse(text.begin(), text.end(), cb);
}

Json yaml_scalar_to_json(const YAML::Node& node) {
    const std::string& value = node.Scalar();
    const std::string& tag = node.Tag();
    if (tag == "!" || tag == "tag:yaml.org,2002:str") {
        return value;
    }
    if (value.empty() || value == "~" || value == "null" || value == "Null" || value == "NULL") {
        return nullptr;
    }
    if (value == "true" || value == "True" || value == "TRUE") return true;
    if (value == "false" || value == "False" || value == "FALSE") return false;

    static const std::regex kInt(R"([-+]?[0-9]+)");
    static const std::regex kFloat(R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
    if (std::regex_match(value, kInt)) {
        std::int64_t v = 0;
        const char* begin = value.data() + (value.front() == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(begin, value.data() + value.size(), v);
        if (ec == std::errc() && ptr == value.data() + value.size()) return v;
    }
    if (std::regex_match(value, kFloat)) {
        try {
            return std::stod(value);
        } catch (const std::exception&) {
        }
    }
    return value;
}

Json yaml_to_json(const YAML::Node& node, KeyPath& path, std::vector<KeyPath>& duplicates) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Scalar:
            return yaml_scalar_to_json(node);
        case YAML::NodeType::Sequence: {
            Json arr = Json::array();
            path.push_back("[]");
            for (const auto& item : node) arr.push_back(yaml_to_json(item, path, duplicates));
            path.pop_back();
            return arr;
        }
        case YAML::NodeType::Map: {
            Json obj = Json::object();
            for (const auto& kv : node) {
                if (!kv.first.IsScalar()) {
                    throw Error(ErrorCode::MalformedDocument, "non-scalar mapping key in YAML");
                }
                const std::string key = kv.first.Scalar();
                if (obj.contains(key)) {
                    auto p = path;
                    p.push_back(key);
                    duplicates.push_back(std::move(p));
                    continue;
                }
                path.push_back(key);
                obj[key] = yaml_to_json(kv.second, path, duplicates);
                path.pop_back();
            }
            return obj;
        }
    }
    return nullptr;
}

Json parse_yaml_tracking(std::string_view text, std::vector<KeyPath>& duplicates) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("not valid JSON or YAML: ") + e.what());
    }
    KeyPath path;
    return yaml_to_json(root, path, duplicates);
}

Json parse_tracking(std::string_view text, FormatHint format, std::vector<KeyPath>& duplicates) {
    if (format == FormatHint::json || format == FormatHint::auto_detect) {
        try {
            return parse_json_tracking(text, duplicates);
        } catch (const Json::exception& e) {
            if (format == FormatHint::json) {
                throw Error(ErrorCode::MalformedDocument, std::string("invalid JSON: ") + e.what());
            }
            duplicates.clear();
        }
    }
    return parse_yaml_tracking(text, duplicates);
}

}  // namespace

Json parse_structured_text(std::string_view text, FormatHint format) {
    std::vector<KeyPath> duplicates;
    auto doc = parse_tracking(text, format, duplicates);
    if (!duplicates.empty()) {
        throw Error(ErrorCode::MalformedDocument, "duplicate key " + join_path(duplicates.front()));
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Schema JSON -> SchemaNode

namespace {

std::optional<std::string> opt_string(const Json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

SchemaKind kind_from_type_name(const std::string& name) {
    if (name == "object") return SchemaKind::object;
    if (name == "array") return SchemaKind::array;
    if (name == "string") return SchemaKind::string;
    if (name == "number") return SchemaKind::number;
    if (name == "integer") return SchemaKind::integer;
    if (name == "boolean") return SchemaKind::boolean;
    if (name == "null") return SchemaKind::null;
    throw Error(ErrorCode::MalformedDocument, "unknown schema type '" + name + "'");
}

SchemaNode schema_from_json(const Json& j) {
    SchemaNode node;
    if (j.is_boolean()) {
        return node;  // `true` schema: anything
    }
    if (!j.is_object()) {
        throw Error(ErrorCode::MalformedDocument, "schema must be an object");
    }
    node.description = opt_string(j, "description");
    if (auto it = j.find("$ref"); it != j.end()) {
        if (!it->is_string()) throw Error(ErrorCode::MalformedDocument, "$ref must be a string");
        node.ref = it->get<std::string>();
        return node;
    }

    bool typed = false;
    if (auto it = j.find("type"); it != j.end()) {
        if (it->is_string()) {
            node.kind = kind_from_type_name(it->get<std::string>());
            typed = true;
        } else if (it->is_array()) {
            // 3.1 type arrays: first non-null entry, else null.
            std::optional<SchemaKind> chosen;
            for (const auto& t : *it) {
                if (!t.is_string()) continue;
                auto k = kind_from_type_name(t.get<std::string>());
                if (k != SchemaKind::null && !chosen) chosen = k;
            }
            node.kind = chosen.value_or(SchemaKind::null);
            typed = true;
        } else {
            throw Error(ErrorCode::MalformedDocument, "schema type must be a string or array");
        }
    }

    if (auto it = j.find("properties"); it != j.end()) {
        if (!it->is_object()) throw Error(ErrorCode::MalformedDocument, "properties must be an object");
        for (const auto& [name, sub] : it->items()) {
            node.properties.emplace_back(name, schema_from_json(sub));
        }
        if (!typed) node.kind = SchemaKind::object;
    }
    if (auto it = j.find("items"); it != j.end() && (it->is_object() || it->is_boolean())) {
        node.items = std::make_shared<const SchemaNode>(schema_from_json(*it));
        if (!typed) node.kind = SchemaKind::array;
    }
    if (auto it = j.find("required"); it != j.end() && it->is_array()) {
        for (const auto& r : *it) {
            if (r.is_string()) node.required.insert(r.get<std::string>());
        }
    }
    if (auto it = j.find("example"); it != j.end()) {
        node.example = *it;
    } else if (auto ex = j.find("examples"); ex != j.end() && ex->is_array() && !ex->empty()) {
        node.example = ex->front();
    }
    if (auto it = j.find("enum"); it != j.end() && it->is_array() && !it->empty()) {
        node.enum_values = std::vector<Json>(it->begin(), it->end());
    }
    for (const char* key : {"anyOf", "oneOf"}) {
        if (auto it = j.find(key); it != j.end() && it->is_array()) {
            for (const auto& alt : *it) node.composite_of.push_back(schema_from_json(alt));
        }
    }
    if (!node.composite_of.empty()) node.kind = SchemaKind::composite;
    if (auto it = j.find("allOf"); it != j.end() && it->is_array()) {
        for (const auto& member : *it) node.all_of.push_back(schema_from_json(member));
        if (!typed && node.kind == SchemaKind::any) node.kind = SchemaKind::object;
    }
    return node;
}

// ---------------------------------------------------------------------------
// Reference resolution

std::string decode_pointer_token(std::string_view token) {
    std::string out;
    for (std::size_t i = 0; i < token.size(); ++i) {
        if (token[i] == '~' && i + 1 < token.size()) {
            out.push_back(token[i + 1] == '1' ? '/' : '~');
            ++i;
        } else {
            out.push_back(token[i]);
        }
    }
    return out;
}

struct RefTarget {
    std::string name;
    const SchemaNode* node;
};

class Resolver {
public:
    explicit Resolver(std::unordered_map<std::string, RefTarget> targets)
        : targets_(std::move(targets)) {}

    SchemaNode resolve(const SchemaNode& node) {
        if (node.ref) return resolve_ref(node);

        SchemaNode out = node;
        for (auto& [_, p] : out.properties) p = resolve(p);
        if (out.items) out.items = std::make_shared<const SchemaNode>(resolve(*out.items));
        for (auto& alt : out.composite_of) alt = resolve(alt);

        if (!out.all_of.empty()) {
            auto members = std::move(out.all_of);
            out.all_of.clear();
            for (const auto& raw : members) merge_into(out, resolve(raw));
        }
        if (out.kind == SchemaKind::object) {
            std::erase_if(out.required, [&out](const std::string& r) { return !out.property(r); });
        }
        return out;
    }

private:
    SchemaNode resolve_ref(const SchemaNode& node) {
        const auto& ref = *node.ref;
        auto it = targets_.find(ref);
        if (it == targets_.end()) {
            throw Error(ErrorCode::DanglingReference, "unresolvable reference '" + ref + "'");
        }
        const auto& target = it->second;
        if (std::find(stack_.begin(), stack_.end(), target.name) != stack_.end()) {
            SchemaNode cut;
            cut.cycle_marker = target.name;
            cut.description = node.description;
            return cut;
        }
        if (static_cast<int>(stack_.size()) >= kMaxRefDepth) {
            throw Error(ErrorCode::DepthExceeded,
                        "reference nesting deeper than " + std::to_string(kMaxRefDepth) + " at '" +
                            ref + "'");
        }
        stack_.push_back(target.name);
        SchemaNode out = resolve(*target.node);
        stack_.pop_back();
        if (!out.description && node.description) out.description = node.description;
        return out;
    }

    static void merge_into(SchemaNode& base, const SchemaNode& member) {
        if (base.kind == SchemaKind::any && member.kind != SchemaKind::any) base.kind = member.kind;
        for (const auto& [name, prop] : member.properties) {
            auto existing = std::find_if(base.properties.begin(), base.properties.end(),
                                         [&name](const auto& kv) { return kv.first == name; });
            if (existing != base.properties.end()) {
                existing->second = prop;
            } else {
                base.properties.emplace_back(name, prop);
            }
        }
        base.required.insert(member.required.begin(), member.required.end());
        if (!base.description && member.description) base.description = member.description;
        if (!base.example && member.example) base.example = member.example;
        if (!base.items && member.items) base.items = member.items;
        if (!base.properties.empty() && (base.kind == SchemaKind::any)) base.kind = SchemaKind::object;
    }

    std::unordered_map<std::string, RefTarget> targets_;
    std::vector<std::string> stack_;
};

Resolver make_component_resolver(const ServiceSpec& spec) {
    std::unordered_map<std::string, RefTarget> targets;
    for (const auto& [name, node] : spec.component_schemas) {
        targets.emplace("#/components/schemas/" + name, RefTarget{name, &node});
    }
    return Resolver(std::move(targets));
}

// ---------------------------------------------------------------------------
// OpenAPI document walk

const Json* follow_component_ref(const Json& root, const Json& obj, std::string_view section) {
    auto it = obj.find("$ref");
    if (it == obj.end()) return &obj;
    if (!it->is_string()) throw Error(ErrorCode::MalformedDocument, "$ref must be a string");
    const auto ref = it->get<std::string>();
    const std::string prefix = "#/components/" + std::string(section) + "/";
    if (ref.rfind(prefix, 0) != 0) {
        throw Error(ErrorCode::DanglingReference, "unsupported reference '" + ref + "'");
    }
    const auto name = decode_pointer_token(std::string_view(ref).substr(prefix.size()));
    const Json* comps = nullptr;
    if (auto c = root.find("components"); c != root.end() && c->is_object()) {
        if (auto s = c->find(std::string(section)); s != c->end() && s->is_object()) comps = &*s;
    }
    if (!comps || !comps->contains(name)) {
        throw Error(ErrorCode::DanglingReference, "unresolvable reference '" + ref + "'");
    }
    return &comps->at(name);
}

std::optional<SchemaNode> schema_from_content(const Json& holder) {
    auto content = holder.find("content");
    if (content == holder.end() || !content->is_object() || content->empty()) return std::nullopt;
    const Json* media = nullptr;
    if (auto j = content->find("application/json"); j != content->end()) {
        media = &*j;
    } else {
        for (const auto& [type, value] : content->items()) {
            if (type.find("json") != std::string::npos) {
                media = &value;
                break;
            }
        }
        if (!media) media = &content->begin().value();
    }
    if (!media->is_object()) return std::nullopt;
    auto schema = media->find("schema");
    if (schema == media->end()) return std::nullopt;
    auto node = schema_from_json(*schema);
    if (!node.example) {
        if (auto ex = media->find("example"); ex != media->end()) node.example = *ex;
    }
    return node;
}

Parameter parse_parameter(const Json& root, const Json& raw) {
    if (!raw.is_object()) throw Error(ErrorCode::MalformedDocument, "parameter must be an object");
    const Json& p = *follow_component_ref(root, raw, "parameters");
    Parameter param;
    auto name = opt_string(p, "name");
    auto in = opt_string(p, "in");
    if (!name || !in) throw Error(ErrorCode::MalformedDocument, "parameter needs 'name' and 'in'");
    param.name = *name;
    if (*in == "path") {
        param.location = ParameterLocation::path;
    } else if (*in == "query") {
        param.location = ParameterLocation::query;
    } else if (*in == "header" || *in == "cookie") {
        param.location = ParameterLocation::header;
    } else {
        throw Error(ErrorCode::MalformedDocument, "unknown parameter location '" + *in + "'");
    }
    if (auto s = p.find("schema"); s != p.end()) {
        param.schema = schema_from_json(*s);
    } else if (auto c = schema_from_content(p)) {
        param.schema = std::move(*c);
    } else {
        param.schema.kind = SchemaKind::string;
    }
    if (!param.schema.description) param.schema.description = opt_string(p, "description");
    if (auto r = p.find("required"); r != p.end() && r->is_boolean()) param.required = r->get<bool>();
    if (param.location == ParameterLocation::path) param.required = true;
    return param;
}

std::vector<std::string> path_variables(std::string_view path) {
    std::vector<std::string> vars;
    std::size_t pos = 0;
    while ((pos = path.find('{', pos)) != std::string_view::npos) {
        auto end = path.find('}', pos);
        if (end == std::string_view::npos) {
            throw Error(ErrorCode::MalformedDocument, "unbalanced braces in path " + std::string(path));
        }
        vars.emplace_back(path.substr(pos + 1, end - pos - 1));
        pos = end + 1;
    }
    return vars;
}

std::vector<Parameter> merge_parameters(std::vector<Parameter> base, std::vector<Parameter> overrides) {
    for (auto& p : overrides) {
        auto it = std::find_if(base.begin(), base.end(), [&p](const Parameter& b) {
            return b.name == p.name && b.location == p.location;
        });
        if (it != base.end()) {
            *it = std::move(p);
        } else {
            base.push_back(std::move(p));
        }
    }
    return base;
}

std::vector<Parameter> parse_parameter_list(const Json& root, const Json& holder) {
    std::vector<Parameter> params;
    auto it = holder.find("parameters");
    if (it == holder.end()) return params;
    if (!it->is_array()) throw Error(ErrorCode::MalformedDocument, "parameters must be an array");
    for (const auto& raw : *it) params.push_back(parse_parameter(root, raw));
    return params;
}

Endpoint parse_operation(const Json& root, HttpMethod method, const std::string& path,
                         const Json& op, const std::vector<Parameter>& path_params) {
    if (!op.is_object()) throw Error(ErrorCode::MalformedDocument, "operation must be an object");
    Endpoint ep;
    ep.method = method;
    ep.path = path;
    ep.endpoint_id = make_endpoint_id(method, path);
    ep.summary = opt_string(op, "summary");
    ep.description = opt_string(op, "description");
    if (auto t = op.find("tags"); t != op.end() && t->is_array()) {
        for (const auto& tag : *t) {
            if (tag.is_string()) ep.tags.push_back(tag.get<std::string>());
        }
    }
    ep.parameters = merge_parameters(path_params, parse_parameter_list(root, op));

    for (const auto& var : path_variables(path)) {
        const bool declared = std::any_of(ep.parameters.begin(), ep.parameters.end(), [&](const auto& p) {
            return p.location == ParameterLocation::path && p.name == var;
        });
        if (!declared) {
            Parameter synthesized;
            synthesized.name = var;
            synthesized.location = ParameterLocation::path;
            synthesized.schema.kind = SchemaKind::string;
            synthesized.required = true;
            ep.parameters.push_back(std::move(synthesized));
        }
    }

    if (auto rb = op.find("requestBody"); rb != op.end()) {
        if (!rb->is_object()) throw Error(ErrorCode::MalformedDocument, "requestBody must be an object");
        ep.request_schema = schema_from_content(*follow_component_ref(root, *rb, "requestBodies"));
    }
    if (auto responses = op.find("responses"); responses != op.end()) {
        if (!responses->is_object()) throw Error(ErrorCode::MalformedDocument, "responses must be an object");
        for (const auto& [status, raw] : responses->items()) {
            if (status.rfind("x-", 0) == 0) continue;
            if (!raw.is_object()) throw Error(ErrorCode::MalformedDocument, "response must be an object");
            const Json& resp = *follow_component_ref(root, raw, "responses");
            auto schema = schema_from_content(resp);
            if (!schema) {
                schema.emplace();
                schema->description = opt_string(resp, "description");
            }
            ep.response_schemas.emplace(status, std::move(*schema));
        }
    }
    return ep;
}

std::string version_string(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw Error(ErrorCode::MalformedDocument, "openapi version must be a string");
}

bool is_known_path_item_key(const std::string& key) {
    return key == "summary" || key == "description" || key == "servers" || key == "parameters";
}

}  // namespace

ServiceSpec parse_spec(std::string_view document_text, const ParseOptions& options) {
    if (document_text.empty()) {
        throw Error(ErrorCode::MalformedDocument, "document is empty");
    }
    std::vector<KeyPath> duplicates;
    Json root = parse_tracking(document_text, options.format, duplicates);
    for (const auto& dup : duplicates) {
        if (!dup.empty() && dup.front() == "paths" && dup.size() <= 3) {
            throw Error(ErrorCode::DuplicateEndpoint, "duplicate key " + join_path(dup));
        }
    }
    if (!duplicates.empty()) {
        throw Error(ErrorCode::MalformedDocument, "duplicate key " + join_path(duplicates.front()));
    }
    if (!root.is_object()) {
        throw Error(ErrorCode::MalformedDocument, "document root is not a mapping");
    }

    auto version_it = root.find("openapi");
    if (version_it == root.end()) {
        if (root.contains("swagger")) {
            throw Error(ErrorCode::UnsupportedVersion,
                        "swagger " + version_string(root["swagger"]) + " documents are not supported");
        }
        throw Error(ErrorCode::MalformedDocument, "missing 'openapi' field");
    }
    const auto version = version_string(*version_it);
    if (version != "3" && version.rfind("3.", 0) != 0) {
        throw Error(ErrorCode::UnsupportedVersion, "openapi " + version + " is not 3.x");
    }

    ServiceSpec spec;
    spec.source_digest = Digest256::of(document_text);
    if (auto info = root.find("info"); info != root.end() && info->is_object()) {
        spec.title = opt_string(*info, "title").value_or("");
        if (auto v = info->find("version"); v != info->end() && (v->is_string() || v->is_number())) {
            spec.version = version_string(*v);
        }
        spec.description = opt_string(*info, "description");
    }
    spec.service_id = options.service_id ? slugify(*options.service_id) : slugify(spec.title);

    if (auto servers = root.find("servers"); servers != root.end() && servers->is_array()) {
        for (const auto& s : *servers) {
            if (s.is_object()) {
                if (auto url = opt_string(s, "url")) spec.base_urls.push_back(*url);
            }
        }
    }

    if (auto comps = root.find("components"); comps != root.end() && comps->is_object()) {
        if (auto schemas = comps->find("schemas"); schemas != comps->end() && schemas->is_object()) {
            for (const auto& [name, raw] : schemas->items()) {
                spec.component_schemas.emplace_back(name, schema_from_json(raw));
            }
        }
    }

    std::set<std::string> seen_ids;
    if (auto paths = root.find("paths"); paths != root.end()) {
        if (!paths->is_object()) throw Error(ErrorCode::MalformedDocument, "paths must be a mapping");
        for (const auto& [path, item] : paths->items()) {
            if (path.rfind("x-", 0) == 0) continue;
            if (path.empty() || path.front() != '/') {
                throw Error(ErrorCode::MalformedDocument, "path '" + path + "' must start with '/'");
            }
            if (!item.is_object()) {
                throw Error(ErrorCode::MalformedDocument, "path item for " + path + " is not a mapping");
            }
            if (item.contains("$ref")) {
                throw Error(ErrorCode::MalformedDocument, "path item references are not supported (" + path + ")");
            }
            const auto path_params = parse_parameter_list(root, item);
            for (const auto& [key, op] : item.items()) {
                if (key.rfind("x-", 0) == 0 || is_known_path_item_key(key)) continue;
                auto method = parse_http_method(key);
                if (!method) {
                    throw Error(ErrorCode::MalformedDocument,
                                "unsupported method or key '" + key + "' under " + path);
                }
                auto ep = parse_operation(root, *method, path, op, path_params);
                if (!seen_ids.insert(ep.endpoint_id).second) {
                    throw Error(ErrorCode::DuplicateEndpoint, ep.endpoint_id);
                }
                spec.endpoints.push_back(std::move(ep));
            }
        }
    }
    return spec;
}

ServiceSpec resolve_refs(const ServiceSpec& spec) {
    auto resolver = make_component_resolver(spec);
    ServiceSpec out = spec;
    for (auto& ep : out.endpoints) {
        for (auto& p : ep.parameters) p.schema = resolver.resolve(p.schema);
        if (ep.request_schema) ep.request_schema = resolver.resolve(*ep.request_schema);
        for (auto& [_, schema] : ep.response_schemas) schema = resolver.resolve(schema);
    }
    return out;
}

ServiceSpec load_spec_file(const std::filesystem::path& path, const ParseOptions& options) {
    const auto text = read_file(path);
    ParseOptions opts = options;
    if (opts.format == FormatHint::auto_detect) {
        const auto ext = to_lower_ascii(path.extension().string());
        if (ext == ".yaml" || ext == ".yml") opts.format = FormatHint::yaml;
    }
    return resolve_refs(parse_spec(text, opts));
}

std::vector<std::string> list_endpoints(const ServiceSpec& spec) {
    std::vector<std::string> ids;
    ids.reserve(spec.endpoints.size());
    for (const auto& ep : spec.endpoints) ids.push_back(ep.endpoint_id);
    return ids;
}

void assign_unique_service_ids(std::vector<ServiceSpec>& specs) {
    std::set<std::string> taken;
    for (auto& spec : specs) {
        if (taken.insert(spec.service_id).second) continue;
        for (int n = 2;; ++n) {
            auto candidate = spec.service_id + "-" + std::to_string(n);
            if (taken.insert(candidate).second) {
                spec.service_id = std::move(candidate);
                break;
            }
        }
    }
}

SchemaNode parse_schema_document(const Json& document) {
    if (!document.is_object()) {
        throw Error(ErrorCode::FormatError, "schema document must be an object");
    }
    std::vector<std::pair<std::string, SchemaNode>> defs;
    std::vector<std::string> refs;
    auto collect = [&](const Json& holder, const std::string& prefix) {
        if (!holder.is_object()) return;
        for (const auto& [name, raw] : holder.items()) {
            defs.emplace_back(name, schema_from_json(raw));
            refs.push_back(prefix + name);
        }
    };
    if (auto d = document.find("$defs"); d != document.end()) collect(*d, "#/$defs/");
    if (auto d = document.find("definitions"); d != document.end()) collect(*d, "#/definitions/");
    if (auto c = document.find("components"); c != document.end() && c->is_object()) {
        if (auto s = c->find("schemas"); s != c->end()) collect(*s, "#/components/schemas/");
    }
    std::unordered_map<std::string, RefTarget> targets;
    for (std::size_t i = 0; i < defs.size(); ++i) {
        targets.emplace(refs[i], RefTarget{defs[i].first, &defs[i].second});
    }
    Resolver resolver(std::move(targets));
    try {
        return resolver.resolve(schema_from_json(document));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedDocument) throw Error(ErrorCode::FormatError, e.detail());
        throw;
    }
}

}  // namespace apicompose
