#include "apicompose/discovery.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "apicompose/error.hpp"

namespace apicompose {

EndpointCatalog make_catalog(const std::vector<ServiceSpec>& services) {
    EndpointCatalog catalog;
    for (const auto& s : services) catalog[s.service_id] = list_endpoints(s);
    return catalog;
}

DiscoveryBenchmark load_benchmark(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw Error(ErrorCode::FormatError, "benchmark file unreadable: " + e.detail());
    }
    DiscoveryBenchmark bench;
    Json root;
    try {
        root = Json::parse(text);
        bench.name = root.at("name").get<std::string>();
        for (const auto& s : root.at("services")) bench.service_files.emplace_back(s.get<std::string>());
        for (const auto& q : root.at("queries")) {
            DiscoveryQuery query;
            query.query_id = q.at("id").get<std::string>();
            query.text = q.at("query").get<std::string>();
            for (const auto& e : q.at("expected")) {
                auto id = e.get<std::string>();
                if (std::find(query.expected_endpoint_ids.begin(), query.expected_endpoint_ids.end(), id) ==
                    query.expected_endpoint_ids.end()) {
                    query.expected_endpoint_ids.push_back(std::move(id));
                }
            }
            bench.queries.push_back(std::move(query));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
    }

    std::set<std::string> query_ids;
    for (const auto& q : bench.queries) {
        if (!query_ids.insert(q.query_id).second) {
            throw Error(ErrorCode::FormatError, "duplicate query id '" + q.query_id + "'");
        }
        if (q.expected_endpoint_ids.empty()) {
            throw Error(ErrorCode::EmptyExpectedSet, "query '" + q.query_id + "' has no expected endpoints");
        }
        for (const auto& id : q.expected_endpoint_ids) {
            if (!is_endpoint_id(id)) {
                throw Error(ErrorCode::FormatError, "query '" + q.query_id + "': '" + id + "' is not METHOD /path");
            }
        }
    }

    const auto base = path.parent_path();
    for (const auto& file : bench.service_files) {
        try {
            bench.services.push_back(load_spec_file(base / file));
        } catch (const Error& e) {
            throw Error(ErrorCode::FormatError, (base / file).string() + ": " +
                                                    std::string(error_code_name(e.code())) + ": " + e.detail());
        }
    }
    assign_unique_service_ids(bench.services);

    std::set<std::string> known;
    for (const auto& s : bench.services) {
        for (const auto& ep : s.endpoints) known.insert(ep.endpoint_id);
    }
    std::vector<std::string> unknown;
    for (const auto& q : bench.queries) {
        for (const auto& id : q.expected_endpoint_ids) {
            if (!known.count(id)) unknown.push_back(q.query_id + ": " + id);
        }
    }
    if (!unknown.empty()) {
        std::string detail;
        for (std::size_t i = 0; i < unknown.size(); ++i) detail += (i ? ", " : "") + unknown[i];
        throw Error(ErrorCode::UnknownEndpoint, detail);
    }
    return bench;
}

Index build_corpus_index(const std::vector<ServiceSpec>& services, ChunkStrategy strategy,
                         const EmbeddingProviderConfig& config, EmbeddingCache& cache) {
    std::vector<Chunk> chunks;
    for (const auto& s : services) {
        auto cs = chunk_spec(s, strategy);
        chunks.insert(chunks.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
    }
    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embed_batch(texts, config, cache, TextRole::passage);

    std::vector<IndexEntry> entries;
    entries.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        entries.push_back({chunks[i].chunk_id, chunks[i].endpoint_id, chunks[i].service_id, std::move(vectors[i])});
    }
    return build_index(std::move(entries), config.model_id, strategy);
}

DiscoveryResult discover(const Index& index, const EmbeddingProviderConfig& config, EmbeddingCache& cache,
                         const std::string& query_text, std::size_t k_chunks, const EndpointCatalog* catalog) {
    if (index.model_id() != config.model_id) {
        throw Error(ErrorCode::ModelMismatch,
                    "index built with '" + index.model_id() + "', embedder is '" + config.model_id + "'");
    }
    const auto query = embed_batch({query_text}, config, cache, TextRole::query).front();
    const auto hits = search_top_k(index, query, k_chunks);

    DiscoveryResult result;
    std::set<std::string> seen;
    auto add = [&](const std::string& id, double score) {
        if (seen.insert(id).second) {
            result.ranked_endpoint_ids.push_back(id);
            result.scores.push_back(score);
        }
    };
    for (const auto& hit : hits) {
        result.retrieved_chunk_ids.push_back(hit.chunk_id);
        if (hit.endpoint_id) {
            add(*hit.endpoint_id, hit.score);
            continue;
        }
        if (!catalog) {
            throw Error(ErrorCode::InvalidArgument,
                        "whole-spec chunk '" + hit.chunk_id + "' needs the service documents to expand");
        }
        auto it = catalog->find(hit.service_id);
        if (it == catalog->end()) {
            throw Error(ErrorCode::InvalidArgument, "no endpoints known for service '" + hit.service_id + "'");
        }
        for (const auto& id : it->second) add(id, hit.score);
    }
    return result;
}

MetricsAtK compute_metrics(const DiscoveryResult& result, const std::vector<std::string>& expected,
                           const std::vector<std::size_t>& k_values) {
    if (expected.empty()) throw Error(ErrorCode::EmptyExpectedSet, "expected set is empty");
    const std::set<std::string> want(expected.begin(), expected.end());
    const auto& ranked = result.ranked_endpoint_ids;

    MetricsAtK out;
    for (auto k : k_values) {
        if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
        const auto n = std::min(k, ranked.size());
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) hits += want.count(ranked[i]);
        RankMetrics m;
        m.recall = static_cast<double>(hits) / static_cast<double>(want.size());
        m.precision = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
        m.f1 = (m.recall + m.precision) == 0.0 ? 0.0 : 2.0 * m.recall * m.precision / (m.recall + m.precision);
        m.full_match = hits == want.size() ? 1.0 : 0.0;
        out[k] = m;
    }
    return out;
}

MetricsReport evaluate_benchmark(const DiscoveryBenchmark& benchmark, ChunkStrategy strategy,
                                 const EmbeddingProviderConfig& config, std::size_t k_chunks,
                                 const std::vector<std::size_t>& k_values, EmbeddingCache& cache,
                                 std::size_t max_threads) {
    if (k_chunks == 0) throw Error(ErrorCode::InvalidArgument, "k_chunks must be >= 1");
    if (k_values.empty()) throw Error(ErrorCode::InvalidArgument, "k_values is empty");

    const auto index = build_corpus_index(benchmark.services, strategy, config, cache);
    const auto catalog = make_catalog(benchmark.services);

    std::vector<DiscoveryResult> results(benchmark.queries.size());
    std::vector<MetricsAtK> metrics(benchmark.queries.size());
    parallel_for(benchmark.queries.size(), max_threads, [&](std::size_t i) {
        const auto& q = benchmark.queries[i];
        results[i] = discover(index, config, cache, q.text, k_chunks, &catalog);
        results[i].query_id = q.query_id;
        metrics[i] = compute_metrics(results[i], q.expected_endpoint_ids, k_values);
    });

    MetricsReport report;
    report.benchmark = benchmark.name;
    report.strategy = strategy;
    report.model_id = config.model_id;
    report.k_chunks = k_chunks;
    report.k_values = k_values;
    for (std::size_t i = 0; i < results.size(); ++i) {
        report.per_query[results[i].query_id] = metrics[i];
        report.results[results[i].query_id] = std::move(results[i]);
    }
    const auto n = static_cast<double>(report.per_query.size());
    for (auto k : k_values) {
        RankMetrics sum;
        for (const auto& [_, m] : report.per_query) {
            const auto& at = m.at(k);
            sum.recall += at.recall;
            sum.precision += at.precision;
            sum.f1 += at.f1;
            sum.full_match += at.full_match;
        }
        if (n > 0) {
            sum.recall /= n;
            sum.precision /= n;
            sum.f1 /= n;
            sum.full_match /= n;
        }
        report.aggregates[k] = sum;
    }
    return report;
}

namespace {

Json metrics_json(const MetricsAtK& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) {
        const auto suffix = "@" + std::to_string(k);
        j["recall" + suffix] = v.recall;
        j["precision" + suffix] = v.precision;
        j["f1" + suffix] = v.f1;
        j["full_match" + suffix] = v.full_match;
    }
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Json report_to_json(const MetricsReport& report) {
    Json j = Json::object();
    j["benchmark"] = report.benchmark;
    j["strategy"] = std::string(to_string(report.strategy));
    j["model_id"] = report.model_id;
    j["k_chunks"] = report.k_chunks;
    j["k_values"] = report.k_values;
    if (report.strategy == ChunkStrategy::whole_spec) {
        j["note"] = "whole_spec hits expand to every endpoint of the retrieved service in document order";
    }
    j["aggregates"] = metrics_json(report.aggregates);
    Json rate = Json::object();
    for (const auto& [k, v] : report.aggregates) rate["@" + std::to_string(k)] = v.full_match;
    j["full_match_rate"] = std::move(rate);
    Json per_query = Json::object();
    for (const auto& [qid, m] : report.per_query) {
        Json q = metrics_json(m);
        if (auto it = report.results.find(qid); it != report.results.end()) {
            q["ranked_endpoint_ids"] = it->second.ranked_endpoint_ids;
        }
        per_query[qid] = std::move(q);
    }
    j["per_query"] = std::move(per_query);
    return j;
}

std::string report_to_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "query_id,k,recall,precision,f1,full_match\n";
    for (const auto& [qid, m] : report.per_query) {
        for (const auto& [k, v] : m) {
            out << csv_field(qid) << ',' << k << ',' << v.recall << ',' << v.precision << ',' << v.f1 << ','
                << v.full_match << '\n';
        }
    }
    return out.str();
}

}  // namespace apicompose
