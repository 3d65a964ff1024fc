#include <gtest/gtest.h>

#include <numeric>

#include "apicompose/benchgen.hpp"
#include "apicompose/discovery.hpp"
#include "apicompose/error.hpp"
#include "test_support.hpp"

using namespace apicompose;

namespace {

DiscoveryResult ranked(std::vector<std::string> ids) {
    DiscoveryResult r;
    r.ranked_endpoint_ids = std::move(ids);
    r.scores.assign(r.ranked_endpoint_ids.size(), 0.0);
    return r;
}

ErrorCode error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::InvalidArgument;
}

std::filesystem::path write_benchmark(const test::ScratchDir& dir, const Json& queries) {
    Json doc = {{"name", "hand"},
                {"services", Json::array({test::fixture("petstore.yaml").string()})},
                {"queries", queries}};
    atomic_write_file(dir / "bench.json", doc.dump(2));
    return dir / "bench.json";
}

}  // namespace

TEST(ComputeMetrics, HandWorkedCase) {
    const auto m = compute_metrics(ranked({"A", "C", "B", "D"}), {"A", "B"}, {2, 3});
    EXPECT_NEAR(m.at(2).recall, 0.5, 1e-12);
    EXPECT_NEAR(m.at(3).recall, 1.0, 1e-12);
    EXPECT_NEAR(m.at(3).precision, 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(m.at(3).full_match, 1.0, 1e-12);
    EXPECT_NEAR(m.at(2).full_match, 0.0, 1e-12);
    EXPECT_NEAR(m.at(3).f1, 2.0 * 1.0 * (2.0 / 3.0) / (1.0 + 2.0 / 3.0), 1e-12);
}

TEST(ComputeMetrics, EmptyRankingIsAllZero) {
    const auto m = compute_metrics(ranked({}), {"A"}, {1, 5});
    for (const auto& [k, v] : m) {
        EXPECT_EQ(v.recall, 0.0);
        EXPECT_EQ(v.precision, 0.0);
        EXPECT_EQ(v.f1, 0.0);
        EXPECT_EQ(v.full_match, 0.0);
    }
}

TEST(ComputeMetrics, Identity) {
    const auto m = compute_metrics(ranked({"A"}), {"A"}, {1});
    EXPECT_EQ(m.at(1).recall, 1.0);
    EXPECT_EQ(m.at(1).precision, 1.0);
    EXPECT_EQ(m.at(1).f1, 1.0);
}

TEST(ComputeMetrics, PrecisionUsesShortRankingLength) {
    const auto m = compute_metrics(ranked({"A", "B"}), {"A"}, {10});
    EXPECT_NEAR(m.at(10).precision, 0.5, 1e-12);
}

TEST(ComputeMetrics, RecallAndFullMatchMonotoneInK) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> ids;
        for (int i = 0; i < 12; ++i) ids.push_back("E" + std::to_string(rng() % 15));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        std::shuffle(ids.begin(), ids.end(), rng);
        std::vector<std::string> expected = {"E" + std::to_string(rng() % 15), "E" + std::to_string(rng() % 15)};
        const auto m = compute_metrics(ranked(ids), expected, {1, 2, 3, 5, 8, 13});
        double prev_recall = -1, prev_full = -1;
        for (const auto& [k, v] : m) {
            EXPECT_GE(v.recall, prev_recall);
            EXPECT_GE(v.full_match, prev_full);
            prev_recall = v.recall;
            prev_full = v.full_match;
        }
    }
}

TEST(ComputeMetrics, RejectsEmptyExpected) {
    EXPECT_EQ(error_of([] { compute_metrics(ranked({"A"}), {}, {1}); }), ErrorCode::EmptyExpectedSet);
}

TEST(LoadBenchmark, WellFormedFile) {
    test::ScratchDir dir;
    const auto path = write_benchmark(
        dir, Json::array({Json{{"id", "q1"}, {"query", "list pets"}, {"expected", {"GET /pets"}}},
                          Json{{"id", "q2"}, {"query", "adopt"}, {"expected", {"POST /pets/{petId}/adopt"}}}}));
    const auto b = load_benchmark(path);
    EXPECT_EQ(b.name, "hand");
    EXPECT_EQ(b.services.size(), 1u);
    ASSERT_EQ(b.queries.size(), 2u);
    EXPECT_EQ(b.queries[1].query_id, "q2");
}

TEST(LoadBenchmark, UnknownAndEmptyExpectations) {
    test::ScratchDir dir;
    auto p = write_benchmark(dir, Json::array({Json{{"id", "q"}, {"query", "x"}, {"expected", {"GET /nope"}}}}));
    EXPECT_EQ(error_of([&] { load_benchmark(p); }), ErrorCode::UnknownEndpoint);
    p = write_benchmark(dir, Json::array({Json{{"id", "q"}, {"query", "x"}, {"expected", Json::array()}}}));
    EXPECT_EQ(error_of([&] { load_benchmark(p); }), ErrorCode::EmptyExpectedSet);
    EXPECT_EQ(error_of([] { load_benchmark("/nonexistent/benchmark.json"); }), ErrorCode::FormatError);
}

TEST(Discover, SingleEndpointIndex) {
    const auto spec = resolve_refs(parse_spec(R"({"openapi": "3.0.0", "info": {"title": "One", "version": "1"},
        "paths": {"/only": {"get": {"summary": "The only one", "responses": {}}}}})"));
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto ix = build_corpus_index({spec}, ChunkStrategy::endpoint_full, config, cache);
    const auto r = discover(ix, config, cache, "anything at all", 5);
    EXPECT_EQ(r.ranked_endpoint_ids, std::vector<std::string>{"GET /only"});
}

TEST(Discover, DuplicateEndpointChunksCollapse) {
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    std::vector<IndexEntry> entries = {
        {"c1", "GET /a", "s", hash_embed("list pets quickly please", config.dims)},
        {"c2", "GET /a", "s", hash_embed("list pets", config.dims)},
        {"c3", "GET /b", "s", hash_embed("list pets now", config.dims)},
    };
    const auto ix = build_index(entries, config.model_id, ChunkStrategy::endpoint_full);
    const auto r = discover(ix, config, cache, "list pets", 3);
    EXPECT_EQ(r.ranked_endpoint_ids, (std::vector<std::string>{"GET /a", "GET /b"}));
    EXPECT_NEAR(r.scores[0], 1.0, 1e-6);
    EXPECT_EQ(r.retrieved_chunk_ids.front(), "c2");
    EXPECT_EQ(r.retrieved_chunk_ids.size(), 3u);
}

TEST(Discover, ModelMismatch) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto ix = build_corpus_index({spec}, ChunkStrategy::endpoint_full, config, cache);
    auto other = config;
    other.model_id = "different";
    EXPECT_EQ(error_of([&] { discover(ix, other, cache, "pets", 3); }), ErrorCode::ModelMismatch);
}

TEST(Discover, WholeSpecExpandsInDocumentOrder) {
    std::vector<ServiceSpec> services = {load_spec_file(test::fixture("petstore.yaml")),
                                         load_spec_file(test::fixture("compose/inventory.yaml"))};
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto ix = build_corpus_index(services, ChunkStrategy::whole_spec, config, cache);
    const auto catalog = make_catalog(services);
    const auto r = discover(ix, config, cache, "place an order for stocked items", 1, &catalog);
    EXPECT_EQ(r.ranked_endpoint_ids, list_endpoints(services[1]));
    const auto both = discover(ix, config, cache, "place an order for pets", 2, &catalog);
    EXPECT_EQ(both.ranked_endpoint_ids.size(), services[0].endpoints.size() + services[1].endpoints.size());
    EXPECT_THROW(discover(ix, config, cache, "pets", 1, nullptr), Error);
}

TEST(Discover, NeverReturnsUnknownEndpoints) {
    std::vector<ServiceSpec> services = {load_spec_file(test::fixture("petstore.yaml")),
                                         load_spec_file(test::fixture("compose/inventory.yaml"))};
    std::set<std::string> known;
    for (const auto& s : services)
        for (const auto& e : s.endpoints) known.insert(e.endpoint_id);
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    for (auto strategy : {ChunkStrategy::endpoint_full, ChunkStrategy::endpoint_lean, ChunkStrategy::whole_spec}) {
        const auto ix = build_corpus_index(services, strategy, config, cache);
        const auto catalog = make_catalog(services);
        for (const char* q : {"delete a pet", "order", "warehouse list", "zzz"}) {
            const auto r = discover(ix, config, cache, q, 4, &catalog);
            for (const auto& id : r.ranked_endpoint_ids) EXPECT_TRUE(known.count(id)) << id;
            EXPECT_EQ(r.ranked_endpoint_ids.size(), r.scores.size());
        }
    }
}

TEST(Evaluate, SingleQueryAllOnes) {
    test::ScratchDir dir;
    const auto spec_path = dir / "one.json";
    atomic_write_file(spec_path, R"({"openapi": "3.0.0", "info": {"title": "One", "version": "1"},
        "paths": {"/only": {"get": {"summary": "The only one", "responses": {}}}}})");
    atomic_write_file(dir / "b.json", Json{{"name", "one"},
                                           {"services", {"one.json"}},
                                           {"queries", {Json{{"id", "q"}, {"query", "only"}, {"expected", {"GET /only"}}}}}}
                                          .dump());
    const auto bench = load_benchmark(dir / "b.json");
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto report = evaluate_benchmark(bench, ChunkStrategy::endpoint_full, config, 5, kDefaultKValues, cache);
    for (const auto& [k, m] : report.aggregates) {
        EXPECT_EQ(m.recall, 1.0) << k;
        EXPECT_EQ(m.precision, 1.0) << k;
        EXPECT_EQ(m.f1, 1.0) << k;
        EXPECT_EQ(m.full_match, 1.0) << k;
    }
}

class GeneratedBenchmark : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = new test::ScratchDir();
        GenConfig config;
        config.seed = 7;
        config.sectors = {"health-care", "utilities"};
        config.services_per_sector = 5;
        config.endpoints_per_service = 5;
        config.queries_per_service = 4;
        bench_ = new DiscoveryBenchmark(generate_benchmark(config, builtin_vocabulary(), dir_->path()));
    }
    static void TearDownTestSuite() {
        delete bench_;
        delete dir_;
    }
    static test::ScratchDir* dir_;
    static DiscoveryBenchmark* bench_;
};

test::ScratchDir* GeneratedBenchmark::dir_ = nullptr;
DiscoveryBenchmark* GeneratedBenchmark::bench_ = nullptr;

TEST_F(GeneratedBenchmark, SelfRetrievalFloor) {
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto ix = build_corpus_index(bench_->services, ChunkStrategy::endpoint_lean, config, cache);
    std::size_t total = 0, found = 0;
    for (const auto& svc : bench_->services) {
        for (const auto& e : svc.endpoints) {
            ASSERT_TRUE(e.description);
            const auto r = discover(ix, config, cache, *e.description, 5);
            ++total;
            if (std::find(r.ranked_endpoint_ids.begin(), r.ranked_endpoint_ids.end(), e.endpoint_id) !=
                r.ranked_endpoint_ids.end())
                ++found;
        }
    }
    EXPECT_EQ(total, 50u);
    EXPECT_GE(static_cast<double>(found) / static_cast<double>(total), 0.9);
}

TEST_F(GeneratedBenchmark, ReportsAreByteIdentical) {
    EmbeddingProviderConfig config;
    EmbeddingCache c1, c2;
    const auto a = evaluate_benchmark(*bench_, ChunkStrategy::endpoint_full, config, 10, kDefaultKValues, c1, 1);
    const auto b = evaluate_benchmark(*bench_, ChunkStrategy::endpoint_full, config, 10, kDefaultKValues, c2, 4);
    EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
    EXPECT_EQ(report_to_csv(a), report_to_csv(b));
}

TEST_F(GeneratedBenchmark, MeanRecallEqualsSumOverCount) {
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto report = evaluate_benchmark(*bench_, ChunkStrategy::endpoint_lean, config, 3, kDefaultKValues, cache);
    for (auto k : kDefaultKValues) {
        double sum = 0.0;
        for (const auto& [id, m] : report.per_query) sum += m.at(k).recall;
        EXPECT_NEAR(report.aggregates.at(k).recall, sum / static_cast<double>(report.per_query.size()), 1e-12);
    }
}

TEST_F(GeneratedBenchmark, RecallAtTenGrowsWithChunkCount) {
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    double prev = -1.0;
    for (std::size_t k_chunks : {1u, 3u, 5u, 10u}) {
        const auto r = evaluate_benchmark(*bench_, ChunkStrategy::endpoint_full, config, k_chunks, {10}, cache);
        EXPECT_GE(r.aggregates.at(10).recall, prev) << k_chunks;
        prev = r.aggregates.at(10).recall;
    }
}

TEST_F(GeneratedBenchmark, WholeSpecResultsKeepDocumentOrder) {
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto report = evaluate_benchmark(*bench_, ChunkStrategy::whole_spec, config, 2, kDefaultKValues, cache);
    std::map<std::string, std::vector<std::string>> order;
    for (const auto& svc : bench_->services) order[svc.service_id] = list_endpoints(svc);
    for (const auto& [qid, r] : report.results) {
        // Consecutive runs from one service must follow that service's order.
        std::size_t i = 0;
        while (i < r.ranked_endpoint_ids.size()) {
            const auto& id = r.ranked_endpoint_ids[i];
            const std::vector<std::string>* doc = nullptr;
            for (const auto& [svc, ids] : order)
                if (std::find(ids.begin(), ids.end(), id) != ids.end()) doc = &ids;
            ASSERT_NE(doc, nullptr);
            for (std::size_t j = 0; j < doc->size(); ++j, ++i) {
                ASSERT_LT(i, r.ranked_endpoint_ids.size());
                EXPECT_EQ(r.ranked_endpoint_ids[i], (*doc)[j]);
            }
        }
    }
    const auto j = report_to_json(report);
    EXPECT_TRUE(j.contains("aggregates"));
}

TEST_F(GeneratedBenchmark, CsvHasOneRowPerQueryAndK) {
    EmbeddingProviderConfig config;
    EmbeddingCache cache;
    const auto report = evaluate_benchmark(*bench_, ChunkStrategy::endpoint_lean, config, 5, {1, 5}, cache);
    const auto csv = report_to_csv(report);
    EXPECT_TRUE(csv.starts_with("query_id,k,recall,precision,f1,full_match\n"));
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1 + bench_->queries.size() * 2);
}
