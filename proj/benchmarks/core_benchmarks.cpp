#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "apicompose/chunking.hpp"
#include "apicompose/embedding.hpp"
#include "apicompose/harness.hpp"
#include "apicompose/spec_model.hpp"
#include "apicompose/vector_index.hpp"

using namespace apicompose;

namespace {

const ServiceSpec& petstore() {
    static const ServiceSpec spec =
        load_spec_file(std::filesystem::path(APICOMPOSE_FIXTURE_DIR) / "petstore.yaml");
    return spec;
}

EmbeddingVector random_unit(std::mt19937_64& rng, std::size_t dims) {
    std::normal_distribution<float> n(0.0f, 1.0f);
    std::vector<float> v(dims);
    for (auto& x : v) x = n(rng);
    return normalized(std::move(v));
}

}  // namespace

static void BM_SearchTopK(benchmark::State& state) {
    const auto size = static_cast<std::size_t>(state.range(0));
    constexpr std::size_t kDims = 512;
    std::mt19937_64 rng(1);
    std::vector<IndexEntry> entries;
    for (std::size_t i = 0; i < size; ++i)
        entries.push_back({"c" + std::to_string(i), std::nullopt, "svc", random_unit(rng, kDims)});
    const Index index = build_index(std::move(entries), "random", ChunkStrategy::endpoint_full);
    const auto query = random_unit(rng, kDims);
    for (auto _ : state) benchmark::DoNotOptimize(search_top_k(index, query, 10));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(size));
}
BENCHMARK(BM_SearchTopK)->Arg(1000)->Arg(10000);

static void BM_HashEmbed(benchmark::State& state) {
    const std::string text =
        "Returns all pets, optionally filtered by species. Creates a pet and records the adoption request "
        "for the owner with the given identifier.";
    for (auto _ : state) benchmark::DoNotOptimize(hash_embed(text, 512));
    state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_HashEmbed);

static void BM_ChunkSpec(benchmark::State& state) {
    const auto strategy = static_cast<ChunkStrategy>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(chunk_spec(petstore(), strategy));
}
BENCHMARK(BM_ChunkSpec)
    ->Arg(static_cast<int>(ChunkStrategy::whole_spec))
    ->Arg(static_cast<int>(ChunkStrategy::endpoint_full))
    ->Arg(static_cast<int>(ChunkStrategy::endpoint_lean));

static void BM_MatchRequest(benchmark::State& state) {
    const auto& spec = petstore();
    for (auto _ : state) {
        benchmark::DoNotOptimize(match_request(spec, HttpMethod::POST, "/pets/42/adopt"));
        benchmark::DoNotOptimize(match_request(spec, HttpMethod::GET, "/owners/1"));
    }
}
BENCHMARK(BM_MatchRequest);
BENCHMARK_MAIN();
