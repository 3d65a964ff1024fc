#include "apicompose/benchgen.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <string_view>

#include "apicompose/error.hpp"
#include "apicompose/harness.hpp"

namespace apicompose {

namespace detail {
extern const std::string_view kBuiltinVocabulary;
}

namespace {

constexpr std::string_view kVocabularyFormat = "apicompose-vocabulary/1";

const std::vector<std::string_view> kBrands = {
    "Atlas", "Beacon", "Cobalt", "Delta", "Ember", "Fjord", "Granite", "Harbor", "Ion",
    "Juniper", "Keystone", "Lumen", "Meridian", "Nova", "Orchid", "Pinnacle", "Quartz", "Ridge",
    "Summit", "Tidal", "Umbra", "Vertex", "Willow", "Xenon", "Yarrow", "Zephyr"};

const std::vector<std::string_view> kTitleSuffixes = {"Hub",      "Service", "Platform", "API",
                                                      "Gateway",  "Registry", "Manager", "Exchange"};

std::string pluralize(const std::string& noun) {
    auto ends_with = [&](std::string_view s) { return noun.size() >= s.size() && noun.ends_with(s); };
    if (noun.size() >= 2 && noun.back() == 'y' && std::string_view("aeiou").find(noun[noun.size() - 2]) == std::string_view::npos)
        return noun.substr(0, noun.size() - 1) + "ies";
    if (ends_with("s") || ends_with("x") || ends_with("z") || ends_with("ch") || ends_with("sh"))
        return noun + "es";
    return noun + "s";
}

std::vector<std::string> words(const std::string& text) {
    std::vector<std::string> out;
    for (auto w : split(text, ' '))
        if (!w.empty()) out.emplace_back(w);
    return out;
}

std::string capitalized(std::string w) {
    if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    return w;
}

std::string camel_case(const std::string& text) {
    std::string out;
    for (const auto& w : words(text)) out += out.empty() ? w : capitalized(w);
    return out;
}

std::string pascal_case(const std::string& text) { return capitalized(camel_case(text)); }

std::string kebab_case(const std::string& text) {
    std::string out;
    for (const auto& w : words(text)) out += (out.empty() ? "" : "-") + w;
    return out;
}

std::string humanize_identifier(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (std::isupper(static_cast<unsigned char>(c))) {
            out += ' ';
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            out += c;
        }
    }
    return out;
}

std::string replace_all(std::string text, std::string_view from, const std::string& to) {
    for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size())
        text.replace(pos, from.size(), to);
    return text;
}

std::string_view type_name(SchemaKind kind) {
    return to_string(kind);
}

template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

std::string require_string(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty())
        throw Error(ErrorCode::FormatError, where + ": missing string field '" + key + "'");
    return obj[key].get<std::string>();
}

const Json& require_array(const Json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_array() || obj[key].empty())
        throw Error(ErrorCode::FormatError, where + ": '" + key + "' must be a non-empty array");
    return obj[key];
}

// One sampled (verb, noun) pair, before the service slug is known.
struct EndpointShape {
    const ActionVerb* verb;
    std::string noun;
    std::string plural;
};

struct GeneratedEndpoint {
    EndpointShape shape;
    const VocabularyParameter* param;
    std::string path;
    std::string clause;
};

std::string shape_key(const EndpointShape& s) {
    return std::string(to_string(s.verb->method)) + " " + kebab_case(s.plural) +
           (s.verb->scope == VerbScope::item ? "/{}" : "") + "/" + s.verb->action.value_or("");
}

std::vector<EndpointShape> candidate_shapes(const DomainTemplate& t) {
    std::vector<EndpointShape> out;
    std::set<std::string> seen;
    for (const auto& noun : t.resource_nouns) {
        for (const auto& verb : t.action_verbs) {
            EndpointShape s{&verb, noun, pluralize(noun)};
            if (seen.insert(shape_key(s)).second) out.push_back(std::move(s));
        }
    }
    return out;
}

std::string object_phrase(const EndpointShape& s) {
    return replace_all(replace_all(s.verb->object, "{noun}", s.noun), "{plural}", s.plural);
}

bool has_body(HttpMethod m) { return m == HttpMethod::POST || m == HttpMethod::PUT || m == HttpMethod::PATCH; }

std::string nested_id_name(const std::string& noun) { return camel_case(noun) + "Id"; }

Json ref_to(const std::string& component) { return Json{{"$ref", "#/components/schemas/" + component}}; }

Json noun_component(const std::string& noun) {
    Json props = Json::object();
    props["id"] = Json{{"type", "string"}, {"description", "Identifier of the " + noun + "."}};
    props["name"] = Json{{"type", "string"}, {"description", "Display name of the " + noun + "."}};
    props["status"] = Json{{"type", "string"}, {"enum", Json::array({"active", "inactive"})}};
    props["createdAt"] = Json{{"type", "string"}, {"description", "Creation timestamp."}};
    return Json{{"type", "object"},
                {"description", capitalized(noun) + " resource."},
                {"required", Json::array({"id", "name"})},
                {"properties", props}};
}

Json operation(const GeneratedEndpoint& e, const std::string& title, std::set<std::string>& components) {
    const ActionVerb& v = *e.shape.verb;
    const std::string component = pascal_case(e.shape.noun);
    const std::string object = object_phrase(e.shape);
    const std::string label = humanize_identifier(e.param->name);

    Json op = Json::object();
    op["operationId"] = camel_case(v.verb + " " + (v.scope == VerbScope::collection ? e.shape.plural : e.shape.noun));
    op["summary"] = capitalized(v.verb + " " + (v.scope == VerbScope::collection ? e.shape.plural : e.shape.noun));
    op["description"] = capitalized(v.third_person) + " " + object + " in the " + title + e.clause + ".";
    op["tags"] = Json::array({e.shape.plural});

    Json params = Json::array();
    if (v.scope == VerbScope::item) {
        params.push_back(Json{{"name", nested_id_name(e.shape.noun)},
                              {"in", "path"},
                              {"required", true},
                              {"description", "Identifier of the " + e.shape.noun + "."},
                              {"schema", Json{{"type", "string"}}}});
    }
    if (v.action == "search") {
        params.push_back(Json{{"name", "q"},
                              {"in", "query"},
                              {"required", true},
                              {"description", "Keyword to match."},
                              {"schema", Json{{"type", "string"}}}});
    }
    if (!has_body(v.method)) {
        params.push_back(Json{{"name", e.param->name},
                              {"in", "query"},
                              {"required", false},
                              {"description", capitalized(label) + "."},
                              {"schema", Json{{"type", type_name(e.param->type)}}}});
    }
    if (!params.empty()) op["parameters"] = params;

    if (has_body(v.method)) {
        Json props = Json::object();
        Json required = Json::array();
        if (!v.action && e.param->name != "name") {
            props["name"] = Json{{"type", "string"}};
            required.push_back("name");
        }
        props[e.param->name] = Json{{"type", type_name(e.param->type)}, {"description", capitalized(label) + "."}};
        required.push_back(e.param->name);
        op["requestBody"] = Json{
            {"required", true},
            {"content", Json{{"application/json",
                              Json{{"schema", Json{{"type", "object"}, {"required", required}, {"properties", props}}}}}}}};
    }

    auto json_content = [](Json schema) { return Json{{"application/json", Json{{"schema", std::move(schema)}}}}; };
    Json responses = Json::object();
    if (v.action && v.action != "search") {
        const std::string id_name = nested_id_name(e.shape.noun);
        Json props = Json::object();
        props[id_name] = Json{{"type", "string"}};
        props["action"] = Json{{"type", "string"}, {"example", *v.action}};
        props["status"] = Json{{"type", "string"}, {"enum", Json::array({"accepted", "completed"})}};
        const std::string code = v.method == HttpMethod::GET ? "200" : "202";
        responses[code] = Json{{"description", capitalized(*v.action) + " result."},
                               {"content", json_content(Json{{"type", "object"},
                                                             {"required", Json::array({id_name, "status"})},
                                                             {"properties", props}})}};
    } else if (v.method == HttpMethod::DELETE) {
        responses["200"] = Json{
            {"description", "Deletion confirmation."},
            {"content", json_content(Json{{"type", "object"},
                                          {"required", Json::array({"id", "deleted"})},
                                          {"properties", Json{{"id", Json{{"type", "string"}}},
                                                              {"deleted", Json{{"type", "boolean"}}}}}})}};
    } else if (v.scope == VerbScope::collection && v.method == HttpMethod::GET) {
        components.insert(e.shape.noun);
        responses["200"] = Json{{"description", "Matching " + e.shape.plural + "."},
                                {"content", json_content(Json{{"type", "array"}, {"items", ref_to(component)}})}};
    } else {
        components.insert(e.shape.noun);
        const std::string code = v.method == HttpMethod::POST ? "201" : "200";
        responses[code] = Json{{"description", "The " + e.shape.noun + "."}, {"content", json_content(ref_to(component))}};
    }
    if (v.scope == VerbScope::item) responses["404"] = Json{{"description", capitalized(e.shape.noun) + " not found."}};
    op["responses"] = responses;
    return op;
}

std::string parameter_clause(const ActionVerb& v, const VocabularyParameter& p) {
    const std::string label = humanize_identifier(p.name);
    if (has_body(v.method)) return ", setting the " + label + " field";
    if (v.scope == VerbScope::collection) return ", filtered by " + label;
    return ", using the " + label + " option";
}

struct GeneratedService {
    std::string service_id;
    std::string title;
    std::vector<GeneratedEndpoint> endpoints;
};

Json service_document(const GeneratedService& svc, const DomainTemplate& t) {
    std::set<std::string> components;
    // Group operations by path, in order of first appearance.
    std::vector<std::string> path_order;
    std::map<std::string, Json> path_items;
    for (const auto& e : svc.endpoints) {
        if (!path_items.count(e.path)) {
            path_order.push_back(e.path);
            path_items[e.path] = Json::object();
        }
        path_items[e.path][to_lower_ascii(to_string(e.shape.verb->method))] = operation(e, svc.title, components);
    }
    Json paths = Json::object();
    for (const auto& p : path_order) paths[p] = path_items[p];

    Json schemas = Json::object();
    for (const auto& e : svc.endpoints) {
        if (components.count(e.shape.noun) && !schemas.contains(pascal_case(e.shape.noun)))
            schemas[pascal_case(e.shape.noun)] = noun_component(e.shape.noun);
    }

    Json doc = Json::object();
    doc["openapi"] = "3.0.3";
    doc["info"] = Json{{"title", svc.title},
                       {"version", "1.0.0"},
                       {"description", "The " + svc.title + " exposes " + to_lower_ascii(t.display_name) +
                                           " operations on " + std::to_string(components.size() ? components.size() : 1) +
                                           " resource types."}};
    doc["servers"] = Json::array({Json{{"url", "https://" + svc.service_id + ".example.com/v1"}}});
    doc["paths"] = paths;
    if (!schemas.empty()) doc["components"] = Json{{"schemas", schemas}};
    return doc;
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

const std::vector<std::string>& builtin_sector_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& t : builtin_vocabulary()) out.push_back(t.sector);
        return out;
    }();
    return names;
}

std::vector<DomainTemplate> parse_vocabulary(const Json& document) {
    if (!document.is_object()) throw Error(ErrorCode::FormatError, "vocabulary must be a JSON object");
    if (document.contains("format") && document["format"] != kVocabularyFormat)
        throw Error(ErrorCode::FormatError, "unsupported vocabulary format " + document["format"].dump());
    std::vector<DomainTemplate> out;
    std::set<std::string> seen;
    for (const auto& s : require_array(document, "sectors", "vocabulary")) {
        DomainTemplate t;
        t.sector = require_string(s, "sector", "vocabulary sector");
        const std::string where = "sector '" + t.sector + "'";
        if (!seen.insert(t.sector).second) throw Error(ErrorCode::FormatError, "duplicate " + where);
        t.display_name = s.contains("display") ? require_string(s, "display", where) : t.sector;
        for (const auto& n : require_array(s, "resource_nouns", where)) {
            if (!n.is_string() || n.get<std::string>().empty())
                throw Error(ErrorCode::FormatError, where + ": resource nouns must be non-empty strings");
            t.resource_nouns.push_back(to_lower_ascii(n.get<std::string>()));
        }
        for (const auto& v : require_array(s, "action_verbs", where)) {
            ActionVerb verb;
            verb.verb = require_string(v, "verb", where);
            verb.third_person = v.contains("third_person") ? require_string(v, "third_person", where) : verb.verb + "s";
            auto method = parse_http_method(require_string(v, "method", where));
            if (!method) throw Error(ErrorCode::FormatError, where + ": bad method for verb '" + verb.verb + "'");
            verb.method = *method;
            const std::string scope = v.contains("scope") ? require_string(v, "scope", where) : "collection";
            if (scope == "collection") verb.scope = VerbScope::collection;
            else if (scope == "item") verb.scope = VerbScope::item;
            else throw Error(ErrorCode::FormatError, where + ": scope must be collection or item");
            if (v.contains("action")) verb.action = require_string(v, "action", where);
            verb.object = v.contains("object") ? require_string(v, "object", where) : "{plural}";
            t.action_verbs.push_back(std::move(verb));
        }
        for (const auto& p : require_array(s, "parameter_vocab", where)) {
            VocabularyParameter param;
            param.name = require_string(p, "name", where);
            const std::string type = p.contains("type") ? require_string(p, "type", where) : "string";
            if (type == "string") param.type = SchemaKind::string;
            else if (type == "integer") param.type = SchemaKind::integer;
            else if (type == "number") param.type = SchemaKind::number;
            else if (type == "boolean") param.type = SchemaKind::boolean;
            else throw Error(ErrorCode::FormatError, where + ": unsupported parameter type '" + type + "'");
            t.parameter_vocab.push_back(std::move(param));
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<DomainTemplate> builtin_vocabulary() {
    return parse_vocabulary(Json::parse(detail::kBuiltinVocabulary));
}

std::vector<DomainTemplate> load_vocabulary(const std::filesystem::path& path) {
    Json doc;
    try {
        doc = Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
    }
    return parse_vocabulary(doc);
}

void validate(const GenConfig& config) {
    if (config.sectors.empty()) throw Error(ErrorCode::InvalidArgument, "at least one sector is required");
    if (config.services_per_sector < 1) throw Error(ErrorCode::InvalidArgument, "services_per_sector must be >= 1");
    if (config.endpoints_per_service < 1) throw Error(ErrorCode::InvalidArgument, "endpoints_per_service must be >= 1");
    if (config.queries_per_service < 1) throw Error(ErrorCode::InvalidArgument, "queries_per_service must be >= 1");
    if (config.composition_scenarios < 0) throw Error(ErrorCode::InvalidArgument, "composition_scenarios must be >= 0");
}

DiscoveryBenchmark generate_benchmark(const GenConfig& config, const std::vector<DomainTemplate>& templates,
                                      const std::filesystem::path& out_dir) {
    validate(config);

    std::vector<const DomainTemplate*> selected;
    std::set<std::string> seen_sectors;
    for (const auto& name : config.sectors) {
        if (!seen_sectors.insert(name).second) continue;
        auto it = std::find_if(templates.begin(), templates.end(), [&](const auto& t) { return t.sector == name; });
        if (it == templates.end()) throw Error(ErrorCode::InvalidArgument, "no vocabulary for sector '" + name + "'");
        if (it->resource_nouns.empty() || it->action_verbs.empty() || it->parameter_vocab.empty())
            throw Error(ErrorCode::InvalidArgument, "vocabulary for sector '" + name + "' has an empty list");
        selected.push_back(&*it);
    }

    std::vector<std::vector<EndpointShape>> shapes;
    for (const auto* t : selected) {
        shapes.push_back(candidate_shapes(*t));
        if (shapes.back().size() < static_cast<std::size_t>(config.endpoints_per_service))
            throw Error(ErrorCode::InsufficientVocabulary,
                        "sector '" + t->sector + "' yields " + std::to_string(shapes.back().size()) +
                            " distinct endpoints, " + std::to_string(config.endpoints_per_service) + " requested");
    }

    SplitMix64 rng(config.seed);
    std::set<std::string> used_titles;
    std::set<std::string> used_ids;
    Json services_json = Json::array();
    Json queries_json = Json::array();
    std::vector<std::pair<std::string, std::string>> files;  // relative path, contents

    for (std::size_t si = 0; si < selected.size(); ++si) {
        const DomainTemplate& t = *selected[si];
        for (int s = 0; s < config.services_per_sector; ++s) {
            GeneratedService svc;
            for (int attempt = 0;; ++attempt) {
                std::string title = std::string(kBrands[rng.below(kBrands.size())]) + " " + t.display_name + " " +
                                    std::string(kTitleSuffixes[rng.below(kTitleSuffixes.size())]);
                if (attempt >= 32) title += " " + std::to_string(attempt - 31);
                const std::string id = slugify(title);
                if (!used_titles.count(title) && !used_ids.count(id)) {
                    used_titles.insert(title);
                    used_ids.insert(id);
                    svc.title = title;
                    svc.service_id = id;
                    break;
                }
            }

            std::vector<EndpointShape> pool = shapes[si];
            shuffle(pool, rng);
            pool.resize(static_cast<std::size_t>(config.endpoints_per_service));
            for (auto& shape : pool) {
                GeneratedEndpoint e{shape, &t.parameter_vocab[rng.below(t.parameter_vocab.size())], {}, {}};
                e.path = "/" + svc.service_id + "/" + kebab_case(shape.plural);
                if (shape.verb->scope == VerbScope::item) e.path += "/{" + nested_id_name(shape.noun) + "}";
                if (shape.verb->action) e.path += "/" + *shape.verb->action;
                e.clause = parameter_clause(*shape.verb, *e.param);
                svc.endpoints.push_back(std::move(e));
            }

            const std::string rel = "specs/" + svc.service_id + ".json";
            files.emplace_back(rel, dump_document(service_document(svc, t)));
            services_json.push_back(rel);

            std::vector<std::size_t> order(svc.endpoints.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            shuffle(order, rng);
            for (int q = 0; q < config.queries_per_service; ++q) {
                const GeneratedEndpoint& e = svc.endpoints[order[static_cast<std::size_t>(q) % order.size()]];
                const ActionVerb& v = *e.shape.verb;
                const std::string rest = object_phrase(e.shape) + " in the " + svc.title + e.clause;
                std::string text;
                switch (rng.below(3)) {
                    case 0: text = "How can I " + v.verb + " " + rest + "?"; break;
                    case 1: text = "I need to " + v.verb + " " + rest + "."; break;
                    default: text = "Which API " + v.third_person + " " + rest + "?"; break;
                }
                queries_json.push_back(Json{{"id", svc.service_id + "-q" + std::to_string(q + 1)},
                                            {"query", text},
                                            {"expected", Json::array({make_endpoint_id(v.method, e.path)})}});
            }
        }
    }

    std::string sector_list;
    for (const auto* t : selected) sector_list += (sector_list.empty() ? "" : ",") + t->sector;
    Json bench = Json::object();
    bench["name"] = "generated-seed" + std::to_string(config.seed) + "-" + sector_list;
    bench["services"] = services_json;
    bench["queries"] = queries_json;

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "specs", ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + (out_dir / "specs").string() + ": " + ec.message());
    for (const auto& [rel, contents] : files) atomic_write_file(out_dir / rel, contents);
    atomic_write_file(out_dir / "benchmark.json", dump_document(bench));

    return load_benchmark(out_dir / "benchmark.json");
}

std::vector<CompositionScenario> generate_composition_scenarios(const GenConfig& config,
                                                                const DiscoveryBenchmark& benchmark) {
    std::vector<CompositionScenario> out;
    if (config.composition_scenarios <= 0) return out;
    if (benchmark.services.empty()) throw Error(ErrorCode::NotEnoughEndpoints, "benchmark has no services");

    SplitMix64 rng(config.seed ^ 0xC0DEC0DE5EED5EEDULL);
    for (int n = 0; n < config.composition_scenarios; ++n) {
        const std::size_t si = rng.below(benchmark.services.size());
        const ServiceSpec& svc = benchmark.services[si];
        const std::size_t count = svc.endpoints.size();
        if (count < 2)
            throw Error(ErrorCode::NotEnoughEndpoints,
                        "service '" + svc.service_id + "' has " + std::to_string(count) + " endpoint(s)");
        const std::size_t take = std::min<std::size_t>(count, 2 + rng.below(2));
        std::vector<std::size_t> idx(count);
        for (std::size_t i = 0; i < count; ++i) idx[i] = i;
        for (std::size_t j = 0; j < take; ++j) std::swap(idx[j], idx[j + rng.below(count - j)]);
        idx.resize(take);
        std::sort(idx.begin(), idx.end());

        CompositionScenario sc;
        char id[32];
        std::snprintf(id, sizeof id, "scenario-%03d", n + 1);
        sc.scenario_id = id;

        static const char* const kLeads[] = {"First: ", " Then: ", " Finally: "};
        for (std::size_t j = 0; j < take; ++j) {
            const Endpoint& ep = svc.endpoints[idx[j]];
            sc.expected_endpoint_ids.push_back(ep.endpoint_id);
            const char* lead = j == 0 ? kLeads[0] : (j + 1 == take && take > 2 ? kLeads[2] : kLeads[1]);
            std::string sentence = ep.description.value_or(ep.summary.value_or(ep.endpoint_id));
            if (!sentence.empty() && sentence.back() != '.') sentence += '.';
            sc.task_text += lead + sentence;
        }
        sc.task_text += " Print the result of the last step as JSON.";

        const Endpoint& first = svc.endpoints[idx.front()];
        Json props = Json::object();
        Json required = Json::array();
        for (const auto& p : first.parameters) {
            props[p.name] = schema_to_json(p.schema);
            if (p.required) required.push_back(p.name);
        }
        if (first.request_schema && first.request_schema->kind == SchemaKind::object) {
            for (const auto& [name, schema] : first.request_schema->properties) {
                if (props.contains(name)) continue;
                props[name] = schema_to_json(schema);
                if (first.request_schema->required.count(name)) required.push_back(name);
            }
        }
        sc.input_schema = Json{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
                               {"type", "object"},
                               {"properties", props},
                               {"required", required}};

        const auto [status, schema] = success_response(svc.endpoints[idx.back()]);
        (void)status;
        sc.output_schema = Json{{"$schema", "https://json-schema.org/draft/2020-12/schema"}};
        if (schema) {
            const Json body = schema_to_json(*schema);
            for (const auto& [k, v] : body.items()) sc.output_schema[k] = v;
        }
        sc.services.push_back(benchmark.service_files[si]);
        out.push_back(std::move(sc));
    }
    return out;
}

Json to_json(const CompositionScenario& scenario) {
    Json services = Json::array();
    for (const auto& s : scenario.services) services.push_back(s.generic_string());
    return Json{{"scenario_id", scenario.scenario_id},
                {"task_text", scenario.task_text},
                {"input_schema", scenario.input_schema},
                {"output_schema", scenario.output_schema},
                {"expected_endpoint_ids", scenario.expected_endpoint_ids},
                {"services", services}};
}

CompositionScenario scenario_from_json(const Json& value) {
    try {
        CompositionScenario sc;
        sc.scenario_id = value.at("scenario_id").get<std::string>();
        sc.task_text = value.at("task_text").get<std::string>();
        sc.input_schema = value.at("input_schema");
        sc.output_schema = value.at("output_schema");
        sc.expected_endpoint_ids = value.at("expected_endpoint_ids").get<std::vector<std::string>>();
        for (const auto& s : value.at("services")) sc.services.emplace_back(s.get<std::string>());
        if (sc.expected_endpoint_ids.empty())
            throw Error(ErrorCode::FormatError, "scenario '" + sc.scenario_id + "' has no expected endpoints");
        if (sc.services.empty())
            throw Error(ErrorCode::FormatError, "scenario '" + sc.scenario_id + "' lists no services");
        return sc;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, std::string("bad scenario: ") + e.what());
    }
}

void save_scenarios(const std::filesystem::path& path, const std::vector<CompositionScenario>& scenarios) {
    Json list = Json::array();
    for (const auto& s : scenarios) list.push_back(to_json(s));
    atomic_write_file(path, dump_document(Json{{"scenarios", list}}));
}

std::vector<CompositionScenario> load_scenarios(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw Error(ErrorCode::FormatError, e.detail());
    }
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
    }
    std::vector<CompositionScenario> out;
    if (doc.is_object() && doc.contains("scenarios")) {
        if (!doc["scenarios"].is_array()) throw Error(ErrorCode::FormatError, "'scenarios' must be an array");
        for (const auto& s : doc["scenarios"]) out.push_back(scenario_from_json(s));
    } else {
        out.push_back(scenario_from_json(doc));
    }
    return out;
}

}  // namespace apicompose
