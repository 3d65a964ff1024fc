#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apicompose/spec_model.hpp"
#include "apicompose/tokens.hpp"

namespace apicompose {

enum class ChunkStrategy { whole_spec, endpoint_full, endpoint_lean };

/// Names are part of the on-disk formats: "whole_spec", "endpoint_full", "endpoint_lean".
std::string_view to_string(ChunkStrategy strategy) noexcept;
/// Throws InvalidArgument for unknown names.
ChunkStrategy parse_chunk_strategy(std::string_view name);

struct Chunk {
    std::string chunk_id;
    std::string service_id;
    std::optional<std::string> endpoint_id;  // absent for whole_spec chunks
    ChunkStrategy strategy = ChunkStrategy::endpoint_full;
    std::string text;
    std::size_t token_estimate = 0;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Schema outlines stop descending below this nesting level.
inline constexpr int kOutlineDepthCap = 4;

/// Renders a resolved spec into retrieval chunks. whole_spec yields exactly one
/// chunk; the endpoint strategies yield one chunk per endpoint in document
/// order and throw EmptySpec when the spec has no endpoints.
std::vector<Chunk> chunk_spec(const ServiceSpec& spec, ChunkStrategy strategy,
                              const TokenCounter& counter = default_token_counter());

/// Indented `name: type` tree.
std::string render_schema_outline(const SchemaNode& schema, int indent = 0);

Json chunk_to_json(const Chunk& chunk);
Chunk chunk_from_json(const Json& j);

std::string chunks_to_jsonl(const std::vector<Chunk>& chunks);
/// Throws FormatError on malformed lines.
std::vector<Chunk> chunks_from_jsonl(std::string_view text);

}  // namespace apicompose
