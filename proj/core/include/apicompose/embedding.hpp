#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apicompose/spec_model.hpp"

namespace apicompose {

/// Fixed-dimension embedding. Unit norm, or all-zero for texts without tokens.
struct EmbeddingVector {
    std::vector<float> values;

    std::size_t dims() const noexcept { return values.size(); }
    double norm() const noexcept;
    bool is_zero() const noexcept;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Scales to unit length in double precision; all-zero input stays all-zero.
EmbeddingVector normalized(std::vector<float> values);

double dot(const EmbeddingVector& a, const EmbeddingVector& b);

enum class ProviderKind { remote, hashing };

std::string_view to_string(ProviderKind kind) noexcept;

struct EmbeddingProviderConfig {
    ProviderKind kind = ProviderKind::hashing;
    std::string model_id = "hashing";
    std::size_t dims = 512;
    std::optional<std::string> base_url;
    std::string api_key_env = "APICOMPOSE_EMBEDDING_API_KEY";
    std::size_t batch_size = 64;
    std::size_t max_parallel_batches = 4;
    int timeout_ms = 30000;
    int retries = 2;
    int backoff_base_ms = 500;
    // Some embedding models expect distinct query/passage prefixes.
    std::string query_prefix;
    std::string passage_prefix;
};

/// Throws InvalidArgument when the config violates its invariants.
void validate(const EmbeddingProviderConfig& config);

EmbeddingProviderConfig embedding_config_from_json(const Json& j);
Json to_json(const EmbeddingProviderConfig& config);

/// Embedding cache keyed by (model_id, dims, SHA-256 of text). Always keeps an
/// in-memory map; with a directory it also persists one file per key there
/// (written atomically), so interrupted runs keep their progress.
class EmbeddingCache {
public:
    struct Stats {
        std::size_t hits = 0;
        std::size_t misses = 0;
    };

    EmbeddingCache() = default;
    explicit EmbeddingCache(std::filesystem::path directory);

    EmbeddingCache(const EmbeddingCache&) = delete;
    EmbeddingCache& operator=(const EmbeddingCache&) = delete;

    std::optional<EmbeddingVector> get(std::string_view model_id, std::size_t dims, std::string_view text);
    void put(std::string_view model_id, std::size_t dims, std::string_view text, const EmbeddingVector& vector);

    Stats stats() const;
    void record_hit();
    const std::optional<std::filesystem::path>& directory() const noexcept { return directory_; }

    static std::string key(std::string_view model_id, std::size_t dims, std::string_view text);

private:
    std::optional<std::filesystem::path> directory_;
    mutable std::mutex mutex_;
    std::map<std::string, EmbeddingVector, std::less<>> memory_;
    Stats stats_;
};

/// Cache files hold a little-endian uint32 dimension count followed by float32 values.
std::string encode_cache_record(const EmbeddingVector& vector);
/// Throws FormatError.
EmbeddingVector decode_cache_record(std::string_view bytes);

/// Offline feature-hashing embedder: lowercase, alphanumeric tokens, unigrams
/// plus "_"-joined bigrams, FNV-1a 64 signed buckets, L2 normalisation.
/// Throws InvalidArgument when dims < 8.
EmbeddingVector hash_embed(std::string_view text, std::size_t dims);

enum class TextRole { passage, query };

/// Embeds `texts` in order. Cache lookups happen before any provider call and
/// the cache is filled afterwards.
///
/// Throws ProviderUnreachable, ProviderError or DimensionMismatch.
std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts,
                                         const EmbeddingProviderConfig& config, EmbeddingCache& cache,
                                         TextRole role = TextRole::passage);

}  // namespace apicompose
