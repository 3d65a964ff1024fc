#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "apicompose/chunking.hpp"
#include "apicompose/embedding.hpp"
#include "apicompose/spec_model.hpp"
#include "apicompose/vector_index.hpp"

namespace apicompose {

struct DiscoveryQuery {
    std::string query_id;
    std::string text;
    std::vector<std::string> expected_endpoint_ids;  // distinct, file order
};

struct DiscoveryBenchmark {
    std::string name;
    std::vector<std::filesystem::path> service_files;  // as written in the file
    std::vector<ServiceSpec> services;                 // parsed + resolved, same order
    std::vector<DiscoveryQuery> queries;
};

/// Service id -> endpoint ids in document order. Needed to expand whole_spec hits.
using EndpointCatalog = std::map<std::string, std::vector<std::string>>;

EndpointCatalog make_catalog(const std::vector<ServiceSpec>& services);

struct DiscoveryResult {
    std::string query_id;
    std::vector<std::string> ranked_endpoint_ids;  // deduplicated, best rank first
    std::vector<double> scores;                    // parallel to ranked_endpoint_ids
    std::vector<std::string> retrieved_chunk_ids;  // raw top-k chunks
};

struct RankMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    double full_match = 0.0;

    friend bool operator==(const RankMetrics&, const RankMetrics&) = default;
};

using MetricsAtK = std::map<std::size_t, RankMetrics>;

inline const std::vector<std::size_t> kDefaultKValues = {1, 3, 5, 10};

struct MetricsReport {
    std::string benchmark;
    ChunkStrategy strategy = ChunkStrategy::endpoint_full;
    std::string model_id;
    std::size_t k_chunks = 0;
    std::vector<std::size_t> k_values;
    std::map<std::string, MetricsAtK> per_query;
    MetricsAtK aggregates;  // means over queries; full_match is the full-match rate
    std::map<std::string, DiscoveryResult> results;
};

/// Reads the benchmark JSON and the OpenAPI documents it lists (paths are
/// relative to the benchmark file). Throws FormatError, UnknownEndpoint or
/// EmptyExpectedSet.
DiscoveryBenchmark load_benchmark(const std::filesystem::path& path);

/// Chunks every service, embeds the chunks and builds the index.
Index build_corpus_index(const std::vector<ServiceSpec>& services, ChunkStrategy strategy,
                         const EmbeddingProviderConfig& config, EmbeddingCache& cache);

/// Embeds the query, takes the top `k_chunks` chunks and maps them to
/// endpoints. Whole-spec chunks expand to every endpoint of their service in
/// document order, which requires `catalog`.
/// Throws ModelMismatch plus propagated embedding and index errors.
DiscoveryResult discover(const Index& index, const EmbeddingProviderConfig& config, EmbeddingCache& cache,
                         const std::string& query_text, std::size_t k_chunks,
                         const EndpointCatalog* catalog = nullptr);

/// Standard IR metrics over the ranked endpoint list.
MetricsAtK compute_metrics(const DiscoveryResult& result, const std::vector<std::string>& expected,
                           const std::vector<std::size_t>& k_values);

MetricsReport evaluate_benchmark(const DiscoveryBenchmark& benchmark, ChunkStrategy strategy,
                                 const EmbeddingProviderConfig& config, std::size_t k_chunks,
                                 const std::vector<std::size_t>& k_values, EmbeddingCache& cache,
                                 std::size_t max_threads = 1);

Json report_to_json(const MetricsReport& report);
/// One row per query_id x k.
std::string report_to_csv(const MetricsReport& report);

}  // namespace apicompose
