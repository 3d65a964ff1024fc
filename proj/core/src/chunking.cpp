#include "apicompose/chunking.hpp"

#include <sstream>

#include "apicompose/error.hpp"

namespace apicompose {

std::string_view to_string(ChunkStrategy strategy) noexcept {
    switch (strategy) {
        case ChunkStrategy::whole_spec: return "whole_spec";
        case ChunkStrategy::endpoint_full: return "endpoint_full";
        case ChunkStrategy::endpoint_lean: return "endpoint_lean";
    }
    return "endpoint_full";
}

ChunkStrategy parse_chunk_strategy(std::string_view name) {
    if (name == "whole_spec") return ChunkStrategy::whole_spec;
    if (name == "endpoint_full") return ChunkStrategy::endpoint_full;
    if (name == "endpoint_lean") return ChunkStrategy::endpoint_lean;
    throw Error(ErrorCode::InvalidArgument, "unknown chunk strategy '" + std::string(name) + "'");
}

namespace {

std::string type_label(const SchemaNode& node) {
    if (node.cycle_marker) return "<recursive:" + *node.cycle_marker + ">";
    std::string label;
    switch (node.kind) {
        case SchemaKind::array:
            label = "array<" + (node.items ? type_label(*node.items) : std::string("any")) + ">";
            break;
        case SchemaKind::composite: {
            label = "oneOf<";
            for (std::size_t i = 0; i < node.composite_of.size(); ++i) {
                if (i) label += " | ";
                label += type_label(node.composite_of[i]);
            }
            label += ">";
            break;
        }
        default:
            label = std::string(to_string(node.kind));
    }
    if (node.enum_values) {
        label += " enum[";
        for (std::size_t i = 0; i < node.enum_values->size(); ++i) {
            if (i) label += ", ";
            const auto& v = (*node.enum_values)[i];
            label += v.is_string() ? v.get<std::string>() : v.dump();
        }
        label += "]";
    }
    return label;
}

// Object-like node whose children should be listed under it.
const SchemaNode* expandable(const SchemaNode& node) {
    if (node.cycle_marker) return nullptr;
    if (node.kind == SchemaKind::object && !node.properties.empty()) return &node;
    if (node.kind == SchemaKind::array && node.items) return expandable(*node.items);
    return nullptr;
}

void render_properties(std::ostringstream& out, const SchemaNode& object, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (depth > kOutlineDepthCap) {
        out << pad << "...\n";
        return;
    }
    for (const auto& [name, prop] : object.properties) {
        out << pad << name << ": " << type_label(prop);
        if (object.required.count(name)) out << " (required)";
        out << '\n';
        if (const auto* child = expandable(prop)) render_properties(out, *child, indent + 1, depth + 1);
    }
}

void render_header(std::ostringstream& out, const ServiceSpec& spec) {
    out << "Service: " << spec.title << '\n';
    if (!spec.version.empty()) out << "Version: " << spec.version << '\n';
    if (spec.description) out << "Description: " << *spec.description << '\n';
    if (!spec.base_urls.empty()) {
        out << "Base URLs:";
        for (const auto& url : spec.base_urls) out << ' ' << url;
        out << '\n';
    }
}

void render_endpoint_full(std::ostringstream& out, const Endpoint& ep) {
    out << "Endpoint: " << to_string(ep.method) << ' ' << ep.path << '\n';
    if (ep.summary) out << "Summary: " << *ep.summary << '\n';
    if (ep.description) out << "Description: " << *ep.description << '\n';
    if (!ep.tags.empty()) {
        out << "Tags:";
        for (const auto& t : ep.tags) out << ' ' << t;
        out << '\n';
    }
    if (!ep.parameters.empty()) {
        out << "Parameters:\n";
        for (const auto& p : ep.parameters) {
            out << "  - " << p.name << " (" << to_string(p.location) << ", " << type_label(p.schema)
                << ", " << (p.required ? "required" : "optional") << ")";
            if (p.schema.description) out << ": " << *p.schema.description;
            out << '\n';
        }
    }
    if (ep.request_schema) {
        out << "Request body:\n" << render_schema_outline(*ep.request_schema, 1);
    }
    if (!ep.response_schemas.empty()) {
        out << "Responses:\n";
        for (const auto& [status, schema] : ep.response_schemas) {
            out << "  " << status << ":";
            if (schema.description) out << ' ' << *schema.description;
            out << '\n';
            if (schema.kind != SchemaKind::any || schema.cycle_marker) {
                out << render_schema_outline(schema, 2);
            }
        }
    }
}

void render_endpoint_lean(std::ostringstream& out, const Endpoint& ep) {
    out << to_string(ep.method) << ' ' << ep.path << '\n';
    if (ep.summary) out << "Summary: " << *ep.summary << '\n';
    if (ep.description) out << "Description: " << *ep.description << '\n';
    if (!ep.parameters.empty()) {
        out << "Parameters:";
        for (std::size_t i = 0; i < ep.parameters.size(); ++i) {
            out << (i ? ", " : " ") << ep.parameters[i].name;
        }
        out << '\n';
    }
}

Chunk make_chunk(const ServiceSpec& spec, const Endpoint* ep, ChunkStrategy strategy, std::string text,
                 const TokenCounter& counter) {
    Chunk c;
    c.service_id = spec.service_id;
    c.strategy = strategy;
    if (ep) {
        c.endpoint_id = ep->endpoint_id;
        c.chunk_id = spec.service_id + "#" + ep->endpoint_id + "#" + std::string(to_string(strategy));
    } else {
        c.chunk_id = spec.service_id + "#__whole__#" + std::string(to_string(strategy));
    }
    c.text = std::move(text);
    c.token_estimate = counter(c.text);
    return c;
}

}  // namespace

std::string render_schema_outline(const SchemaNode& schema, int indent) {
    std::ostringstream out;
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    out << pad << type_label(schema) << '\n';
    if (const auto* child = expandable(schema)) render_properties(out, *child, indent + 1, 1);
    return out.str();
}

std::vector<Chunk> chunk_spec(const ServiceSpec& spec, ChunkStrategy strategy, const TokenCounter& counter) {
    std::vector<Chunk> chunks;
    if (strategy == ChunkStrategy::whole_spec) {
        std::ostringstream out;
        render_header(out, spec);
        for (const auto& ep : spec.endpoints) {
            out << '\n';
            render_endpoint_full(out, ep);
        }
        chunks.push_back(make_chunk(spec, nullptr, strategy, out.str(), counter));
        return chunks;
    }
    if (spec.endpoints.empty()) {
        throw Error(ErrorCode::EmptySpec, "service '" + spec.service_id + "' has no endpoints");
    }
    chunks.reserve(spec.endpoints.size());
    for (const auto& ep : spec.endpoints) {
        std::ostringstream out;
        if (strategy == ChunkStrategy::endpoint_full) {
            render_header(out, spec);
            out << '\n';
            render_endpoint_full(out, ep);
        } else {
            render_endpoint_lean(out, ep);
        }
        chunks.push_back(make_chunk(spec, &ep, strategy, out.str(), counter));
    }
    return chunks;
}

Json chunk_to_json(const Chunk& chunk) {
    Json j = Json::object();
    j["chunk_id"] = chunk.chunk_id;
    j["service_id"] = chunk.service_id;
    j["endpoint_id"] = chunk.endpoint_id ? Json(*chunk.endpoint_id) : Json(nullptr);
    j["strategy"] = std::string(to_string(chunk.strategy));
    j["text"] = chunk.text;
    j["token_estimate"] = chunk.token_estimate;
    return j;
}

Chunk chunk_from_json(const Json& j) {
    try {
        Chunk c;
        c.chunk_id = j.at("chunk_id").get<std::string>();
        c.service_id = j.at("service_id").get<std::string>();
        if (const auto& e = j.at("endpoint_id"); !e.is_null()) c.endpoint_id = e.get<std::string>();
        c.strategy = parse_chunk_strategy(j.at("strategy").get<std::string>());
        c.text = j.at("text").get<std::string>();
        c.token_estimate = j.at("token_estimate").get<std::size_t>();
        if (c.text.empty()) throw Error(ErrorCode::FormatError, "chunk " + c.chunk_id + " has empty text");
        return c;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, std::string("bad chunk record: ") + e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::FormatError, e.detail());
    }
}

std::string chunks_to_jsonl(const std::vector<Chunk>& chunks) {
    std::string out;
    for (const auto& c : chunks) {
        out += chunk_to_json(c).dump();
        out += '\n';
    }
    return out;
}

std::vector<Chunk> chunks_from_jsonl(std::string_view text) {
    std::vector<Chunk> chunks;
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::FormatError, "line " + std::to_string(line_no) + ": " + e.what());
        }
        chunks.push_back(chunk_from_json(j));
    }
    return chunks;
}

}  // namespace apicompose
