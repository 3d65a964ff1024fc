#include "cli.hpp"

#include <signal.h>

#include <CLI11.hpp>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "apicompose/benchgen.hpp"
#include "apicompose/chunking.hpp"
#include "apicompose/discovery.hpp"
#include "apicompose/embedding.hpp"
#include "apicompose/error.hpp"
#include "apicompose/harness.hpp"
#include "apicompose/llm_client.hpp"
#include "apicompose/prompt.hpp"
#include "apicompose/spec_model.hpp"
#include "apicompose/vector_index.hpp"

namespace apicompose::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSandboxNote =
    "WARNING: the runner executes generated code as a normal child process with a timeout. "
    "There is no syscall-level sandbox; only score code you are prepared to run.";

struct Globals {
    std::string config_path;
    std::string cache_dir;
    std::string out_path;
};

std::string dump(const Json& j, int indent = 2) {
    return j.dump(indent, ' ', false, Json::error_handler_t::replace);
}

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

Json read_json_file(const fs::path& path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
    }
}

class Session {
public:
    Session(const Globals& g, std::ostream& out, std::ostream& err) : globals_(g), out_(out), err_(err) {
        if (!g.config_path.empty()) {
            config_ = read_json_file(g.config_path);
            if (!config_.is_object()) throw Error(ErrorCode::FormatError, g.config_path + ": config must be an object");
        }
    }

    EmbeddingProviderConfig provider(const std::string& name) const {
        EmbeddingProviderConfig c;
        if (config_.contains("providers") && config_["providers"].contains(name)) {
            c = embedding_config_from_json(config_["providers"][name]);
        } else if (name != "hashing") {
            throw Error(ErrorCode::InvalidArgument,
                        "unknown embedding provider '" + name + "' (define it under \"providers\" in --config)");
        }
        if (c.kind == ProviderKind::remote) {
            if (auto v = env("APICOMPOSE_EMBEDDING_BASE_URL")) c.base_url = *v;
            if (auto v = env("APICOMPOSE_EMBEDDING_MODEL")) c.model_id = *v;
        }
        validate(c);
        return c;
    }

    LlmConfig llm(const std::string& name, const std::vector<std::string>& mock_files) const {
        LlmConfig c;
        if (config_.contains("llms") && config_["llms"].contains(name)) {
            c = llm_config_from_json(config_["llms"][name]);
        } else if (name == "mock") {
            c.kind = LlmKind::mock;
            c.model_id = "mock";
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown LLM '" + name + "' (define it under \"llms\" in --config)");
        }
        if (!mock_files.empty()) {
            c.kind = LlmKind::mock;
            std::vector<std::string> script;
            for (const auto& f : mock_files) script.push_back(read_file(f));
            c.mock_script = std::move(script);
        }
        if (c.kind == LlmKind::remote) {
            if (auto v = env("APICOMPOSE_LLM_BASE_URL")) c.base_url = *v;
            if (auto v = env("APICOMPOSE_LLM_MODEL")) c.model_id = *v;
        }
        validate(c);
        return c;
    }

    EmbeddingCache& cache() {
        if (!cache_) {
            std::optional<std::string> dir;
            if (!globals_.cache_dir.empty()) dir = globals_.cache_dir;
            else if (auto v = env("APICOMPOSE_CACHE_DIR")) dir = *v;
            else if (config_.contains("cache_dir") && config_["cache_dir"].is_string()) dir = config_["cache_dir"].get<std::string>();
            cache_ = dir ? std::make_unique<EmbeddingCache>(fs::path(*dir)) : std::make_unique<EmbeddingCache>();
        }
        return *cache_;
    }

    void emit(const std::string& text) {
        if (globals_.out_path.empty()) {
            out_ << text;
            out_.flush();
        } else {
            atomic_write_file(globals_.out_path, text);
        }
    }

    std::ostream& out() { return out_; }
    std::ostream& log() { return err_; }

private:
    const Globals& globals_;
    std::ostream& out_;
    std::ostream& err_;
    Json config_ = Json::object();
    std::unique_ptr<EmbeddingCache> cache_;
};

std::vector<ServiceSpec> load_services(const std::vector<std::string>& paths) {
    std::vector<ServiceSpec> specs;
    for (const auto& p : paths) specs.push_back(load_spec_file(p));
    assign_unique_service_ids(specs);
    return specs;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string spec;
    std::string service_id;
};

void cmd_validate(Session& s, const ValidateArgs& a) {
    ParseOptions opts;
    if (!a.service_id.empty()) opts.service_id = a.service_id;
    const ServiceSpec spec = load_spec_file(a.spec, opts);
    Json j = Json::object();
    j["service_id"] = spec.service_id;
    j["title"] = spec.title;
    j["version"] = spec.version;
    j["endpoint_count"] = spec.endpoints.size();
    j["endpoints"] = list_endpoints(spec);
    j["source_digest"] = spec.source_digest.hex();
    s.emit(dump(j) + "\n");
}

struct ChunkArgs {
    std::string spec;
    std::string strategy = "endpoint_full";
};

void cmd_chunk(Session& s, const ChunkArgs& a) {
    const auto strategy = parse_chunk_strategy(a.strategy);
    s.emit(chunks_to_jsonl(chunk_spec(load_spec_file(a.spec), strategy)));
}

struct IndexArgs {
    std::vector<std::string> chunk_files;
    std::string provider = "hashing";
};

void cmd_index(Session& s, const IndexArgs& a) {
    std::vector<Chunk> chunks;
    for (const auto& f : a.chunk_files) {
        auto part = chunks_from_jsonl(read_file(f));
        chunks.insert(chunks.end(), part.begin(), part.end());
    }
    if (chunks.empty()) throw Error(ErrorCode::InvalidArgument, "no chunks in the given files");
    const ChunkStrategy strategy = chunks.front().strategy;
    for (const auto& c : chunks) {
        if (c.strategy != strategy)
            throw Error(ErrorCode::InvalidArgument, "chunks mix strategies ('" + std::string(to_string(strategy)) +
                                                        "' and '" + std::string(to_string(c.strategy)) + "')");
    }
    const auto config = s.provider(a.provider);
    std::vector<std::string> texts;
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embed_batch(texts, config, s.cache(), TextRole::passage);
    std::vector<IndexEntry> entries;
    for (std::size_t i = 0; i < chunks.size(); ++i)
        entries.push_back({chunks[i].chunk_id, chunks[i].endpoint_id, chunks[i].service_id, std::move(vectors[i])});
    const Index index = build_index(std::move(entries), config.model_id, strategy);
    s.emit(serialize_index(index));
    s.log() << "indexed " << index.size() << " chunks (" << index.dims() << " dims, model " << index.model_id()
            << ")\n";
}

struct DiscoverArgs {
    std::string index;
    std::string query;
    std::size_t k = 5;
    std::string provider = "hashing";
    std::vector<std::string> services;
};

void cmd_discover(Session& s, const DiscoverArgs& a) {
    const Index index = load_index(a.index);
    const auto config = s.provider(a.provider);
    std::optional<EndpointCatalog> catalog;
    if (!a.services.empty()) catalog = make_catalog(load_services(a.services));
    const DiscoveryResult r = discover(index, config, s.cache(), a.query, a.k, catalog ? &*catalog : nullptr);
    Json results = Json::array();
    for (std::size_t i = 0; i < r.ranked_endpoint_ids.size(); ++i)
        results.push_back(Json{{"rank", i + 1}, {"endpoint_id", r.ranked_endpoint_ids[i]}, {"score", r.scores[i]}});
    Json j = Json::object();
    j["query"] = a.query;
    j["k_chunks"] = a.k;
    j["model_id"] = index.model_id();
    j["strategy"] = std::string(to_string(index.strategy()));
    j["results"] = results;
    j["retrieved_chunk_ids"] = r.retrieved_chunk_ids;
    s.emit(dump(j) + "\n");
}

struct EvalArgs {
    std::string benchmark;
    std::string strategy = "endpoint_full";
    std::string provider = "hashing";
    std::size_t k_chunks = 10;
    std::vector<std::size_t> k_values = kDefaultKValues;
    std::size_t threads = 1;
    std::string format = "json";
};

void cmd_eval(Session& s, const EvalArgs& a) {
    const auto strategy = parse_chunk_strategy(a.strategy);
    const auto config = s.provider(a.provider);
    const DiscoveryBenchmark bench = load_benchmark(a.benchmark);
    const MetricsReport report =
        evaluate_benchmark(bench, strategy, config, a.k_chunks, a.k_values, s.cache(), a.threads);
    s.emit(a.format == "csv" ? report_to_csv(report) : dump(report_to_json(report)) + "\n");
}

struct BenchgenArgs {
    std::uint64_t seed = 42;
    std::vector<std::string> sectors;
    int services_per_sector = 3;
    int endpoints_per_service = 10;
    int queries_per_service = 5;
    int scenarios = 5;
    std::string out_dir;
    std::string vocabulary;
};

void cmd_benchgen(Session& s, const BenchgenArgs& a) {
    const auto templates = a.vocabulary.empty() ? builtin_vocabulary() : load_vocabulary(a.vocabulary);
    GenConfig config;
    config.seed = a.seed;
    if (a.sectors.empty() || (a.sectors.size() == 1 && a.sectors[0] == "all")) {
        for (const auto& t : templates) config.sectors.push_back(t.sector);
    } else {
        config.sectors = a.sectors;
    }
    config.services_per_sector = a.services_per_sector;
    config.endpoints_per_service = a.endpoints_per_service;
    config.queries_per_service = a.queries_per_service;
    config.composition_scenarios = a.scenarios;

    const fs::path out_dir(a.out_dir);
    const DiscoveryBenchmark bench = generate_benchmark(config, templates, out_dir);
    const auto scenarios = generate_composition_scenarios(config, bench);
    save_scenarios(out_dir / "scenarios.json", scenarios);

    std::size_t endpoints = 0;
    for (const auto& svc : bench.services) endpoints += svc.endpoints.size();
    Json j = Json::object();
    j["benchmark"] = (out_dir / "benchmark.json").generic_string();
    j["scenarios_file"] = (out_dir / "scenarios.json").generic_string();
    j["seed"] = a.seed;
    j["sectors"] = config.sectors;
    j["services"] = bench.services.size();
    j["endpoints"] = endpoints;
    j["queries"] = bench.queries.size();
    j["scenarios"] = scenarios.size();
    s.emit(dump(j) + "\n");
}

struct ScoringArgs {
    std::string runner;
    std::string input;
    int timeout_ms = static_cast<int>(kDefaultRunnerTimeout.count());
};

ValidationReport score_against_mocks(const CompositionArtifact& artifact, const std::vector<ServiceSpec>& services,
                                     const std::vector<std::string>& expected, const Json& input_schema,
                                     const Json& output_schema, const ScoringArgs& a) {
    std::vector<std::unique_ptr<MockService>> mocks;
    for (const auto& svc : services) mocks.push_back(MockService::start(svc));
    ScoreRequest req;
    req.runner_command = a.runner;
    for (const auto& m : mocks) req.mocks.push_back(m.get());
    req.input_document = a.input.empty() ? synthesize_example(parse_schema_document(input_schema)) : read_json_file(a.input);
    req.expected_endpoint_ids = expected;
    req.output_schema = parse_schema_document(output_schema);
    req.timeout = std::chrono::milliseconds(a.timeout_ms);
    ValidationReport report = run_and_score(artifact, req);
    for (auto& m : mocks) m->stop();
    return report;
}

CompositionScenario pick_scenario(const std::string& path, const std::string& id) {
    const auto all = load_scenarios(path);
    if (id.empty()) return all.front();
    for (const auto& sc : all)
        if (sc.scenario_id == id) return sc;
    throw Error(ErrorCode::InvalidArgument, "no scenario '" + id + "' in " + path);
}

std::vector<std::string> scenario_service_paths(const CompositionScenario& sc, const std::string& scenario_file) {
    std::vector<std::string> out;
    const fs::path base = fs::path(scenario_file).parent_path();
    for (const auto& p : sc.services) out.push_back((p.is_absolute() ? p : base / p).string());
    return out;
}

struct ComposeArgs {
    std::string task;
    std::string task_file;
    std::vector<std::string> schemas;
    std::vector<std::string> services;
    std::string scenario;
    std::string scenario_id;
    std::string provider = "hashing";
    std::string llm;
    std::vector<std::string> mock_responses;
    std::string strategy = "endpoint_full";
    std::size_t k_chunks = 5;
    std::size_t budget = kDefaultPromptBudget;
    std::string template_id = kDefaultTemplateId;
    std::string runtime = "Python";
    std::string prompt_out;
    std::string artifact_out;
    std::vector<std::string> expected;
    ScoringArgs scoring;
};

void cmd_compose(Session& s, const ComposeArgs& a) {
    CompositionTask task;
    task.target_runtime_label = a.runtime;
    std::vector<std::string> service_paths = a.services;
    std::vector<std::string> expected = a.expected;
    Json input_schema, output_schema;
    if (!a.scenario.empty()) {
        const auto sc = pick_scenario(a.scenario, a.scenario_id);
        task.task_text = sc.task_text;
        input_schema = sc.input_schema;
        output_schema = sc.output_schema;
        if (service_paths.empty()) service_paths = scenario_service_paths(sc, a.scenario);
        if (expected.empty()) expected = sc.expected_endpoint_ids;
    }
    if (!a.task.empty()) task.task_text = a.task;
    if (!a.task_file.empty()) {
        task.task_text = read_file(a.task_file);
        while (!task.task_text.empty() && std::isspace(static_cast<unsigned char>(task.task_text.back())))
            task.task_text.pop_back();
    }
    if (a.schemas.size() == 2) {
        input_schema = read_json_file(a.schemas[0]);
        output_schema = read_json_file(a.schemas[1]);
    }
    if (task.task_text.empty()) throw CLI::ValidationError("--task", "a task is required (--task, --task-file or --scenario)");
    if (input_schema.is_null()) throw CLI::ValidationError("--schemas", "input and output schemas are required");
    if (service_paths.empty()) throw CLI::ValidationError("--services", "at least one service spec is required");
    if (a.llm.empty() && a.mock_responses.empty()) throw CLI::ValidationError("--llm", "an LLM is required");
    task.input_schema = dump(input_schema);
    task.output_schema = dump(output_schema);
    validate(task);

    const auto services = load_services(service_paths);
    const auto strategy = parse_chunk_strategy(a.strategy);
    const auto emb = s.provider(a.provider);
    const auto llm = s.llm(a.llm.empty() ? "mock" : a.llm, a.mock_responses);

    std::vector<Chunk> chunks;
    for (const auto& svc : services) {
        auto part = chunk_spec(svc, strategy);
        chunks.insert(chunks.end(), part.begin(), part.end());
    }
    std::vector<std::string> texts;
    for (const auto& c : chunks) texts.push_back(c.text);
    auto vectors = embed_batch(texts, emb, s.cache(), TextRole::passage);
    std::vector<IndexEntry> entries;
    for (std::size_t i = 0; i < chunks.size(); ++i)
        entries.push_back({chunks[i].chunk_id, chunks[i].endpoint_id, chunks[i].service_id, std::move(vectors[i])});
    const Index index = build_index(std::move(entries), emb.model_id, strategy);
    const EndpointCatalog catalog = make_catalog(services);
    const DiscoveryResult found = discover(index, emb, s.cache(), task.task_text, a.k_chunks, &catalog);

    std::vector<Chunk> ranked;
    for (const auto& id : found.retrieved_chunk_ids) {
        for (const auto& c : chunks)
            if (c.chunk_id == id) ranked.push_back(c);
    }
    const PromptBundle bundle = assemble_prompt(task, ranked, a.budget, a.template_id);
    if (!a.prompt_out.empty()) atomic_write_file(a.prompt_out, dump(to_json(bundle)) + "\n");

    auto provider = make_chat_provider(llm);
    const CompositionArtifact artifact = generate_composition(bundle, *provider, a.runtime);
    if (!a.artifact_out.empty()) atomic_write_file(a.artifact_out, artifact.code_text);

    Json j = Json::object();
    j["retrieved_chunk_ids"] = found.retrieved_chunk_ids;
    j["prompt"] = Json{{"template_id", bundle.template_id},
                       {"included_chunk_ids", bundle.included_chunk_ids},
                       {"dropped_chunk_ids", bundle.dropped_chunk_ids},
                       {"token_estimate", bundle.token_estimate},
                       {"budget", bundle.budget}};
    j["artifact"] = to_json(artifact);
    if (!a.scoring.runner.empty()) {
        if (expected.empty()) throw CLI::ValidationError("--expected", "scoring needs expected endpoint ids");
        j["validation"] = to_json(score_against_mocks(artifact, services, expected, input_schema, output_schema, a.scoring));
    } else {
        j["validation"] = nullptr;
    }
    s.emit(dump(j) + "\n");
}

struct ScoreArgs {
    std::string artifact;
    std::string scenario;
    std::string scenario_id;
    std::string runtime = "Python";
    ScoringArgs scoring;
};

void cmd_score(Session& s, const ScoreArgs& a) {
    CompositionArtifact artifact;
    const std::string text = read_file(a.artifact);
    artifact.code_text = text;
    artifact.runtime_label = a.runtime;
    // Accept the artifact JSON printed by `compose` as well as raw code.
    if (!text.empty() && text.front() == '{') {
        try {
            const Json j = Json::parse(text);
            if (j.contains("artifact")) artifact.code_text = j["artifact"].at("code_text").get<std::string>();
            else if (j.contains("code_text")) artifact.code_text = j["code_text"].get<std::string>();
        } catch (const Json::exception&) {
        }
    }
    const auto sc = pick_scenario(a.scenario, a.scenario_id);
    const auto services = load_services(scenario_service_paths(sc, a.scenario));
    s.log() << kSandboxNote << "\n";
    const auto report =
        score_against_mocks(artifact, services, sc.expected_endpoint_ids, sc.input_schema, sc.output_schema, a.scoring);
    Json j = to_json(report);
    j["scenario_id"] = sc.scenario_id;
    s.emit(dump(j) + "\n");
}

struct MockServeArgs {
    std::string spec;
    std::string host = "127.0.0.1";
    int port = 0;
    int duration_ms = 0;
};

void cmd_mock_serve(Session& s, const MockServeArgs& a) {
    const ServiceSpec spec = load_spec_file(a.spec);
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &set, &previous);

    auto mock = MockService::start(spec, a.host, a.port);
    s.out() << dump(Json{{"service_id", spec.service_id},
                         {"base_url", mock->base_url()},
                         {"env_var", service_url_env_var(spec.service_id)},
                         {"endpoints", spec.endpoints.size()}},
                    -1)
            << std::endl;
    if (a.duration_ms > 0) {
        timespec ts{a.duration_ms / 1000, static_cast<long>(a.duration_ms % 1000) * 1000000L};
        while (sigtimedwait(&set, nullptr, &ts) < 0 && errno == EINTR) {
        }
    } else {
        int sig = 0;
        sigwait(&set, &sig);
    }
    mock->stop();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);

    Json log = Json::array();
    for (const auto& r : mock->log()) log.push_back(to_json(r));
    s.out() << dump(Json{{"invocations", log}}, -1) << std::endl;
}

void print_error(std::ostream& err, std::string_view code, const std::string& detail) {
    err << dump(Json{{"error", code}, {"detail", detail}}, -1) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Retrieval-augmented API discovery, composition prompting and composition scoring.", "apicompose"};
    const CLI::IsMember kStrategyNames({"whole_spec", "endpoint_full", "endpoint_lean"});
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON config defining \"providers\", \"llms\" and \"cache_dir\"");
    app.add_option("--cache-dir", g.cache_dir, "Embedding cache directory (overrides APICOMPOSE_CACHE_DIR)");
    app.add_option("--out", g.out_path, "Write the report to this file instead of stdout");

    std::function<void(Session&)> action;

    ValidateArgs va;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and resolve an OpenAPI document and summarise it");
    validate_cmd->add_option("spec", va.spec, "OpenAPI file (JSON or YAML)")->required();
    validate_cmd->add_option("--service-id", va.service_id, "Override the title-derived service id");
    validate_cmd->callback([&] { action = [&](Session& s) { cmd_validate(s, va); }; });

    ChunkArgs ca;
    auto* chunk_cmd = app.add_subcommand("chunk", "Render a spec into retrieval chunks (JSONL)");
    chunk_cmd->add_option("spec", ca.spec, "OpenAPI file")->required();
    chunk_cmd->add_option("--strategy", ca.strategy, "whole_spec | endpoint_full | endpoint_lean")
        ->check(kStrategyNames)
        ->capture_default_str();
    chunk_cmd->callback([&] { action = [&](Session& s) { cmd_chunk(s, ca); }; });

    IndexArgs ia;
    auto* index_cmd = app.add_subcommand("index", "Embed chunk files and write a vector index");
    index_cmd->add_option("chunks", ia.chunk_files, "Chunk JSONL files")->required();
    index_cmd->add_option("--provider", ia.provider, "Embedding provider name")->capture_default_str();
    index_cmd->callback([&] { action = [&](Session& s) { cmd_index(s, ia); }; });

    DiscoverArgs da;
    auto* discover_cmd = app.add_subcommand("discover", "Rank endpoints for a natural-language query");
    discover_cmd->add_option("--index", da.index, "Index file")->required();
    discover_cmd->add_option("--query", da.query, "Query text")->required();
    discover_cmd->add_option("--k", da.k, "Number of chunks to retrieve")->capture_default_str();
    discover_cmd->add_option("--provider", da.provider, "Embedding provider name")->capture_default_str();
    discover_cmd->add_option("--services", da.services, "Spec files, needed to expand whole_spec hits");
    discover_cmd->callback([&] { action = [&](Session& s) { cmd_discover(s, da); }; });

    EvalArgs ea;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate retrieval on a discovery benchmark");
    eval_cmd->add_option("--benchmark", ea.benchmark, "Benchmark JSON")->required();
    eval_cmd->add_option("--strategy", ea.strategy, "Chunking strategy")->check(kStrategyNames)->capture_default_str();
    eval_cmd->add_option("--provider", ea.provider, "Embedding provider name")->capture_default_str();
    eval_cmd->add_option("--k-chunks", ea.k_chunks, "Chunks retrieved per query")->capture_default_str();
    eval_cmd->add_option("--k-values", ea.k_values, "Cut-offs for the metrics")->delimiter(',');
    eval_cmd->add_option("--threads", ea.threads, "Queries evaluated in parallel")->capture_default_str();
    eval_cmd->add_option("--format", ea.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    eval_cmd->callback([&] { action = [&](Session& s) { cmd_eval(s, ea); }; });

    BenchgenArgs ba;
    auto* benchgen_cmd = app.add_subcommand("benchgen", "Generate a discovery benchmark and composition scenarios");
    benchgen_cmd->add_option("--seed", ba.seed, "PRNG seed")->capture_default_str();
    benchgen_cmd->add_option("--sectors", ba.sectors, "Comma-separated sector names, or 'all'")->delimiter(',');
    benchgen_cmd->add_option("--services-per-sector", ba.services_per_sector)->capture_default_str();
    benchgen_cmd->add_option("--endpoints-per-service", ba.endpoints_per_service)->capture_default_str();
    benchgen_cmd->add_option("--queries-per-service", ba.queries_per_service)->capture_default_str();
    benchgen_cmd->add_option("--scenarios", ba.scenarios, "Composition scenarios to generate")->capture_default_str();
    benchgen_cmd->add_option("--out-dir", ba.out_dir, "Output directory")->required();
    benchgen_cmd->add_option("--vocabulary", ba.vocabulary, "Vocabulary JSON replacing the built-in one");
    benchgen_cmd->callback([&] { action = [&](Session& s) { cmd_benchgen(s, ba); }; });

    ComposeArgs co;
    auto* compose_cmd = app.add_subcommand(
        "compose", "Retrieve documentation, prompt an LLM for a composition, and optionally score it");
    compose_cmd->add_option("--task", co.task, "Task text");
    compose_cmd->add_option("--task-file", co.task_file, "File holding the task text");
    compose_cmd->add_option("--schemas", co.schemas, "Input and output JSON Schema files")->expected(2);
    compose_cmd->add_option("--services", co.services, "OpenAPI files of the candidate services");
    compose_cmd->add_option("--scenario", co.scenario, "Scenario file supplying task, schemas, services and expected ids");
    compose_cmd->add_option("--scenario-id", co.scenario_id, "Scenario to use from a multi-scenario file");
    compose_cmd->add_option("--provider", co.provider, "Embedding provider name")->capture_default_str();
    compose_cmd->add_option("--llm", co.llm, "LLM name from the config, or 'mock'");
    compose_cmd->add_option("--mock-response", co.mock_responses, "Canned LLM response file (repeatable)");
    compose_cmd->add_option("--strategy", co.strategy, "Chunking strategy")->check(kStrategyNames)->capture_default_str();
    compose_cmd->add_option("--k-chunks", co.k_chunks, "Chunks retrieved into the prompt")->capture_default_str();
    compose_cmd->add_option("--budget", co.budget, "Prompt token budget")->capture_default_str();
    compose_cmd->add_option("--template", co.template_id, "Prompt template id")->capture_default_str();
    compose_cmd->add_option("--runtime", co.runtime, "Target runtime label")->capture_default_str();
    compose_cmd->add_option("--prompt-out", co.prompt_out, "Write the full prompt bundle JSON here");
    compose_cmd->add_option("--artifact-out", co.artifact_out, "Write the generated code here");
    compose_cmd->add_option("--expected", co.expected, "Expected endpoint ids for scoring");
    compose_cmd->add_option("--runner", co.scoring.runner,
                            "Score the result: command with {code_file} and {input_file} placeholders");
    compose_cmd->add_option("--input", co.scoring.input, "Input document for the run (default: synthesized)");
    compose_cmd->add_option("--timeout-ms", co.scoring.timeout_ms, "Runner timeout")->capture_default_str();
    compose_cmd->footer(kSandboxNote);
    compose_cmd->callback([&] { action = [&](Session& s) { cmd_compose(s, co); }; });

    MockServeArgs ma;
    auto* mock_cmd = app.add_subcommand("mock-serve", "Serve an invocation-logging mock of a spec");
    mock_cmd->add_option("spec", ma.spec, "OpenAPI file")->required();
    mock_cmd->add_option("--host", ma.host)->capture_default_str();
    mock_cmd->add_option("--port", ma.port, "0 picks a free port")->capture_default_str();
    mock_cmd->add_option("--duration-ms", ma.duration_ms, "Stop after this long (0: until SIGINT/SIGTERM)")
        ->capture_default_str();
    mock_cmd->callback([&] { action = [&](Session& s) { cmd_mock_serve(s, ma); }; });

    ScoreArgs sa;
    auto* score_cmd = app.add_subcommand("score", "Run a composition against mocks and score it");
    score_cmd->add_option("--artifact", sa.artifact, "Code file, or the JSON printed by compose")->required();
    score_cmd->add_option("--scenario", sa.scenario, "Scenario file")->required();
    score_cmd->add_option("--scenario-id", sa.scenario_id, "Scenario to use from a multi-scenario file");
    score_cmd->add_option("--runner", sa.scoring.runner, "Command with {code_file} and {input_file} placeholders")
        ->required();
    score_cmd->add_option("--input", sa.scoring.input, "Input document for the run (default: synthesized)");
    score_cmd->add_option("--timeout-ms", sa.scoring.timeout_ms, "Runner timeout")->capture_default_str();
    score_cmd->add_option("--runtime", sa.runtime, "Runtime label (selects the code file extension)")
        ->capture_default_str();
    score_cmd->footer(kSandboxNote);
    score_cmd->callback([&] { action = [&](Session& s) { cmd_score(s, sa); }; });

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.push_back("apicompose");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        app.exit(e, out, err);
        print_error(err, "UsageError", e.what());
        return kExitUsageError;
    }

    try {
        Session session(g, out, err);
        action(session);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        print_error(err, "UsageError", e.what());
        return kExitUsageError;
    } catch (const Error& e) {
        print_error(err, error_code_name(e.code()), e.detail());
        return is_transport_error(e.code()) ? kExitTransportError : kExitDomainError;
    } catch (const std::exception& e) {
        print_error(err, "InternalError", e.what());
        return kExitDomainError;
    }
}

}  // namespace apicompose::cli
