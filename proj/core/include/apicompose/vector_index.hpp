#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apicompose/chunking.hpp"
#include "apicompose/embedding.hpp"

namespace apicompose {

struct IndexEntry {
    std::string chunk_id;
    std::optional<std::string> endpoint_id;
    std::string service_id;
    EmbeddingVector vector;

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct SearchHit {
    std::string chunk_id;
    std::optional<std::string> endpoint_id;
    std::string service_id;
    double score = 0.0;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Exact dot-product index. Immutable once built; entries are kept sorted by
/// chunk_id so persistence and tie-breaking are canonical.
class Index {
public:
    std::size_t dims() const noexcept { return dims_; }
    const std::vector<IndexEntry>& entries() const noexcept { return entries_; }
    const std::string& model_id() const noexcept { return model_id_; }
    ChunkStrategy strategy() const noexcept { return strategy_; }
    std::size_t size() const noexcept { return entries_.size(); }

    friend bool operator==(const Index&, const Index&) = default;

private:
    friend Index build_index(std::vector<IndexEntry>, std::string, ChunkStrategy);

    std::size_t dims_ = 0;
    std::vector<IndexEntry> entries_;
    std::string model_id_;
    ChunkStrategy strategy_ = ChunkStrategy::endpoint_full;
};

/// Throws InvalidArgument (empty), DimensionMismatch or DuplicateChunkId.
Index build_index(std::vector<IndexEntry> entries, std::string model_id, ChunkStrategy strategy);

/// Scores descending, ties by ascending chunk_id; returns min(k, size) hits.
/// Throws DimensionMismatch, InvalidArgument (k == 0).
std::vector<SearchHit> search_top_k(const Index& index, const EmbeddingVector& query, std::size_t k);

inline constexpr int kIndexFormatVersion = 1;

std::string serialize_index(const Index& index);
/// Throws FormatError or VersionMismatch.
Index deserialize_index(std::string_view text);

/// Atomic write. Throws IoError.
void persist_index(const Index& index, const std::filesystem::path& path);
/// Throws IoError, FormatError or VersionMismatch.
Index load_index(const std::filesystem::path& path);

}  // namespace apicompose
