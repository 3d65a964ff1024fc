#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apicompose/discovery.hpp"
#include "apicompose/spec_model.hpp"

namespace apicompose {

enum class VerbScope { collection, item };

struct ActionVerb {
    std::string verb;          // "list", "schedule maintenance for"
    std::string third_person;  // "lists"
    HttpMethod method = HttpMethod::GET;
    VerbScope scope = VerbScope::collection;
    std::optional<std::string> action;  // trailing path segment, e.g. "forecast"
    std::string object;                 // phrase with {noun} / {plural} placeholders
};

struct VocabularyParameter {
    std::string name;
    SchemaKind type = SchemaKind::string;
};

struct DomainTemplate {
    std::string sector;  // "energy", "health-care", ...
    std::string display_name;
    std::vector<std::string> resource_nouns;
    std::vector<ActionVerb> action_verbs;
    std::vector<VocabularyParameter> parameter_vocab;
};

/// The sector names the built-in vocabulary covers, in canonical order.
const std::vector<std::string>& builtin_sector_names();

/// Parses a vocabulary document:
///   {"format": "apicompose-vocabulary/1",
///    "sectors": [{"sector", "display", "resource_nouns": [..],
///                 "action_verbs": [{"verb", "third_person", "method",
///                                   "scope": "collection"|"item",
///                                   "action"?, "object"}],
///                 "parameter_vocab": [{"name", "type"}]}]}
/// Throws FormatError.
std::vector<DomainTemplate> parse_vocabulary(const Json& document);
std::vector<DomainTemplate> builtin_vocabulary();
std::vector<DomainTemplate> load_vocabulary(const std::filesystem::path& path);

struct GenConfig {
    std::uint64_t seed = 0;
    std::vector<std::string> sectors;
    int services_per_sector = 1;
    int endpoints_per_service = 1;
    int queries_per_service = 1;
    int composition_scenarios = 0;
};

/// Throws InvalidArgument.
void validate(const GenConfig& config);

/// splitmix64; identical seeds give identical streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() noexcept;
    /// Value in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

private:
    std::uint64_t state_;
};

/// Writes `<out_dir>/specs/<service>.json` and `<out_dir>/benchmark.json` and
/// returns the benchmark as load_benchmark would read it back.
/// Throws InvalidArgument, InsufficientVocabulary or IoError.
DiscoveryBenchmark generate_benchmark(const GenConfig& config, const std::vector<DomainTemplate>& templates,
                                      const std::filesystem::path& out_dir);

struct CompositionScenario {
    std::string scenario_id;
    std::string task_text;
    Json input_schema;
    Json output_schema;
    std::vector<std::string> expected_endpoint_ids;  // invocation order, one service
    std::vector<std::filesystem::path> services;     // relative to the scenarios file
};

/// Throws NotEnoughEndpoints.
std::vector<CompositionScenario> generate_composition_scenarios(const GenConfig& config,
                                                                const DiscoveryBenchmark& benchmark);

Json to_json(const CompositionScenario& scenario);
CompositionScenario scenario_from_json(const Json& value);

/// `{"scenarios": [...]}`. Throws IoError.
void save_scenarios(const std::filesystem::path& path, const std::vector<CompositionScenario>& scenarios);
/// Accepts the list file or a single scenario object. Throws FormatError.
std::vector<CompositionScenario> load_scenarios(const std::filesystem::path& path);

}  // namespace apicompose
