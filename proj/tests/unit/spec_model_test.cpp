#include <gtest/gtest.h>

#include <functional>

#include "apicompose/error.hpp"
#include "apicompose/spec_model.hpp"
#include "test_support.hpp"

using namespace apicompose;

namespace {

ErrorCode error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no apicompose::Error thrown";
    return ErrorCode::InvalidArgument;
}

bool has_ref(const SchemaNode& n) {
    if (n.ref || !n.all_of.empty()) return true;
    for (const auto& [_, p] : n.properties)
        if (has_ref(p)) return true;
    if (n.items && has_ref(*n.items)) return true;
    for (const auto& c : n.composite_of)
        if (has_ref(c)) return true;
    return false;
}

bool spec_has_ref(const ServiceSpec& s) {
    for (const auto& e : s.endpoints) {
        for (const auto& p : e.parameters)
            if (has_ref(p.schema)) return true;
        if (e.request_schema && has_ref(*e.request_schema)) return true;
        for (const auto& [_, r] : e.response_schemas)
            if (has_ref(r)) return true;
    }
    return false;
}

const char* kPing = R"({"openapi": "3.0.0", "info": {"title": "Ping", "version": "1"},
  "paths": {"/ping": {"get": {"responses": {"200": {"description": "ok"}}}}}})";

}  // namespace

TEST(ParseSpec, MinimalPingDocument) {
    const auto spec = parse_spec(kPing);
    EXPECT_EQ(list_endpoints(spec), std::vector<std::string>{"GET /ping"});
    EXPECT_EQ(spec.service_id, "ping");
    EXPECT_EQ(spec.title, "Ping");
}

TEST(ParseSpec, SwaggerTwoIsUnsupported) {
    EXPECT_EQ(error_of([] { parse_spec(R"({"swagger": "2.0", "info": {"title": "x"}, "paths": {}})"); }),
              ErrorCode::UnsupportedVersion);
    EXPECT_EQ(error_of([] { parse_spec("openapi: \"2.0\"\ninfo: {title: x, version: '1'}\npaths: {}\n"); }),
              ErrorCode::UnsupportedVersion);
}

TEST(ParseSpec, MalformedInputs) {
    EXPECT_EQ(error_of([] { parse_spec("{not json"); }), ErrorCode::MalformedDocument);
    EXPECT_EQ(error_of([] { parse_spec("[1, 2]"); }), ErrorCode::MalformedDocument);
    EXPECT_EQ(error_of([] {
                  parse_spec(R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
                     "paths": {"/a": {"fetch": {"responses": {}}}}})");
              }),
              ErrorCode::MalformedDocument);
}

TEST(ParseSpec, DuplicateOperationIsRejected) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/a": {"get": {"responses": {}}, "get": {"responses": {}}}}})";
    EXPECT_EQ(error_of([&] { parse_spec(doc); }), ErrorCode::DuplicateEndpoint);
}

TEST(ParseSpec, CaseInsensitiveMethodCollisionIsDuplicate) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/a": {"get": {"responses": {}}, "GET": {"responses": {}}}}})";
    EXPECT_EQ(error_of([&] { parse_spec(doc); }), ErrorCode::DuplicateEndpoint);
}

TEST(ParseSpec, PetStoreYamlInDocumentOrder) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    EXPECT_EQ(list_endpoints(spec), (std::vector<std::string>{"GET /pets", "POST /pets", "GET /pets/{petId}",
                                                              "DELETE /pets/{petId}", "POST /pets/{petId}/adopt"}));
    EXPECT_EQ(spec.service_id, "pet-store");
    EXPECT_EQ(spec.version, "1.2.0");
    EXPECT_EQ(spec.base_urls, std::vector<std::string>{"https://petstore.example.com/v1"});
    const auto* get_pets = spec.find_endpoint("GET /pets");
    ASSERT_NE(get_pets, nullptr);
    EXPECT_EQ(get_pets->summary.value_or(""), "List pets");
    EXPECT_EQ(get_pets->tags, std::vector<std::string>{"pets"});
    ASSERT_EQ(get_pets->parameters.size(), 2u);
    EXPECT_EQ(get_pets->parameters[0].name, "species");
    EXPECT_EQ(get_pets->parameters[0].location, ParameterLocation::query);
    ASSERT_TRUE(get_pets->parameters[0].schema.enum_values);
    EXPECT_EQ(get_pets->parameters[0].schema.enum_values->size(), 3u);
}

TEST(ParseSpec, JsonAndYamlAgreeStructurally) {
    auto a = load_spec_file(test::fixture("petstore.yaml"));
    auto b = load_spec_file(test::fixture("petstore.json"));
    EXPECT_NE(a.source_digest, b.source_digest);
    a.source_digest = b.source_digest;
    EXPECT_EQ(a, b);
}

TEST(ParseSpec, DeterministicForSameBytes) {
    const auto text = test::fixture_text("petstore.yaml");
    const auto a = parse_spec(text);
    const auto b = parse_spec(text);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.source_digest, Digest256::of(text));
}

TEST(ParseSpec, HeaderParametersAndPathLevelParameters) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    const auto* del = spec.find_endpoint("DELETE /pets/{petId}");
    ASSERT_NE(del, nullptr);
    bool saw_path = false, saw_header = false;
    for (const auto& p : del->parameters) {
        if (p.name == "petId" && p.location == ParameterLocation::path && p.required) saw_path = true;
        if (p.name == "X-Request-Id" && p.location == ParameterLocation::header) saw_header = true;
    }
    EXPECT_TRUE(saw_path);
    EXPECT_TRUE(saw_header);
}

TEST(ParseSpec, EveryPathVariableHasAPathParameter) {
    for (const char* name : {"petstore.yaml", "petstore.json", "nested_refs.yaml", "recursive.yaml",
                             "compose/inventory.yaml"}) {
        const auto spec = load_spec_file(test::fixture(name));
        for (const auto& e : spec.endpoints) {
            for (std::size_t pos = 0; (pos = e.path.find('{', pos)) != std::string::npos;) {
                const auto end = e.path.find('}', pos);
                const auto var = e.path.substr(pos + 1, end - pos - 1);
                bool found = false;
                for (const auto& p : e.parameters)
                    found = found || (p.location == ParameterLocation::path && p.name == var);
                EXPECT_TRUE(found) << name << ": " << e.endpoint_id << " lacks {" << var << "}";
                pos = end;
            }
        }
    }
}

TEST(ParseSpec, MissingPathParameterIsSynthesized) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/users/{userId}": {"get": {"responses": {}}}}})";
    const auto spec = parse_spec(doc);
    ASSERT_EQ(spec.endpoints[0].parameters.size(), 1u);
    EXPECT_EQ(spec.endpoints[0].parameters[0].name, "userId");
    EXPECT_TRUE(spec.endpoints[0].parameters[0].required);
}

TEST(ParseSpec, DanglingComponentParameterReference) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/a": {"get": {"parameters": [{"$ref": "#/components/parameters/Nope"}], "responses": {}}}}})";
    EXPECT_EQ(error_of([&] { parse_spec(doc); }), ErrorCode::DanglingReference);
}

TEST(ParseSpec, ServiceIdOverride) {
    ParseOptions opts;
    opts.service_id = "custom";
    EXPECT_EQ(parse_spec(kPing, opts).service_id, "custom");
}

TEST(ListEndpoints, EmptyPathsAndGetPost) {
    EXPECT_TRUE(list_endpoints(parse_spec(R"({"openapi": "3.1.0", "info": {"title": "e", "version": "1"},
                                              "paths": {}})"))
                    .empty());
    const auto spec = parse_spec(R"({"openapi": "3.1.0", "info": {"title": "e", "version": "1"},
        "paths": {"/x": {"get": {"responses": {}}, "post": {"responses": {}}}}})");
    EXPECT_EQ(list_endpoints(spec), (std::vector<std::string>{"GET /x", "POST /x"}));
}

TEST(ResolveRefs, SingleSubstitution) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/pets": {"post": {
        "requestBody": {"content": {"application/json": {"schema": {"$ref": "#/components/schemas/Pet"}}}},
        "responses": {}}}},
      "components": {"schemas": {"Pet": {"type": "object", "properties": {"name": {"type": "string"}}}}}})";
    const auto spec = resolve_refs(parse_spec(doc));
    const auto& body = *spec.endpoints[0].request_schema;
    EXPECT_EQ(body.kind, SchemaKind::object);
    ASSERT_NE(body.property("name"), nullptr);
    EXPECT_EQ(body.property("name")->kind, SchemaKind::string);
    EXPECT_FALSE(body.ref);
}

TEST(ResolveRefs, ChainOfThreeToStringLeaf) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/a": {"get": {"responses": {"200": {"description": "ok",
        "content": {"application/json": {"schema": {"$ref": "#/components/schemas/A"}}}}}}}},
      "components": {"schemas": {"A": {"$ref": "#/components/schemas/B"},
                                 "B": {"$ref": "#/components/schemas/C"},
                                 "C": {"type": "string"}}}})";
    const auto spec = resolve_refs(parse_spec(doc));
    const auto& s = spec.endpoints[0].response_schemas.at("200");
    EXPECT_EQ(s.kind, SchemaKind::string);
    EXPECT_FALSE(spec_has_ref(spec));
}

TEST(ResolveRefs, NestedDepthFiveFullyInlines) {
    const auto spec = load_spec_file(test::fixture("nested_refs.yaml"));
    EXPECT_FALSE(spec_has_ref(spec));
    const SchemaNode* n = &spec.endpoints[0].response_schemas.at("200");
    for (const char* name : {"l2", "l3", "l4", "l5"}) {
        ASSERT_EQ(n->kind, SchemaKind::object);
        n = n->property(name);
        ASSERT_NE(n, nullptr) << name;
    }
    ASSERT_NE(n->property("value"), nullptr);
    EXPECT_EQ(n->property("value")->kind, SchemaKind::string);
    EXPECT_EQ(resolve_refs(spec), spec);
}

TEST(ResolveRefs, SelfReferenceCarriesCycleMarker) {
    const auto spec = load_spec_file(test::fixture("recursive.yaml"));
    const auto& node = spec.endpoints[0].response_schemas.at("200");
    ASSERT_EQ(node.kind, SchemaKind::object);
    const auto* children = node.property("children");
    ASSERT_NE(children, nullptr);
    ASSERT_EQ(children->kind, SchemaKind::array);
    ASSERT_TRUE(children->items);
    EXPECT_EQ(children->items->cycle_marker.value_or(""), "Node");
    const auto* parent = node.property("parent");
    ASSERT_NE(parent, nullptr);
    EXPECT_EQ(parent->cycle_marker.value_or(""), "Node");
    EXPECT_TRUE(node.is_resolved());
    EXPECT_EQ(resolve_refs(spec), spec);
}

TEST(ResolveRefs, IdempotentOnPetStore) {
    const auto once = load_spec_file(test::fixture("petstore.yaml"));
    EXPECT_EQ(resolve_refs(once), once);
}

TEST(ResolveRefs, AllOfIsMerged) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    const auto& body = *spec.find_endpoint("POST /pets/{petId}/adopt")->request_schema;
    EXPECT_EQ(body.kind, SchemaKind::object);
    EXPECT_NE(body.property("ownerName"), nullptr);
    EXPECT_NE(body.property("note"), nullptr);
    EXPECT_TRUE(body.required.count("ownerName"));
    EXPECT_TRUE(body.required.count("note"));
}

TEST(ResolveRefs, DanglingSchemaReference) {
    const char* doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/a": {"get": {"responses": {"200": {"description": "ok",
        "content": {"application/json": {"schema": {"$ref": "#/components/schemas/Missing"}}}}}}}}})";
    const auto parsed = parse_spec(doc);
    EXPECT_EQ(error_of([&] { resolve_refs(parsed); }), ErrorCode::DanglingReference);
}

TEST(ResolveRefs, DepthBeyondLimit) {
    std::string schemas;
    const int n = kMaxRefDepth + 8;
    for (int i = 0; i < n; ++i) {
        if (i) schemas += ",";
        schemas += "\"S" + std::to_string(i) + "\": {\"type\": \"object\", \"properties\": {\"next\": " +
                   (i + 1 < n ? "{\"$ref\": \"#/components/schemas/S" + std::to_string(i + 1) + "\"}"
                              : std::string("{\"type\": \"string\"}")) +
                   "}}";
    }
    const std::string doc = R"({"openapi": "3.0.0", "info": {"title": "x", "version": "1"},
      "paths": {"/a": {"get": {"responses": {"200": {"description": "ok",
        "content": {"application/json": {"schema": {"$ref": "#/components/schemas/S0"}}}}}}}},
      "components": {"schemas": {)" + schemas + "}}}";
    const auto parsed = parse_spec(doc);
    EXPECT_EQ(error_of([&] { resolve_refs(parsed); }), ErrorCode::DepthExceeded);
}

TEST(ServiceIds, CollisionsGetSuffixes) {
    std::vector<ServiceSpec> specs(3);
    for (auto& s : specs) s.service_id = "pets";
    assign_unique_service_ids(specs);
    EXPECT_EQ(specs[0].service_id, "pets");
    EXPECT_EQ(specs[1].service_id, "pets-2");
    EXPECT_EQ(specs[2].service_id, "pets-3");
}

TEST(EndpointIds, Shape) {
    EXPECT_EQ(make_endpoint_id(HttpMethod::DELETE, "/a/{b}"), "DELETE /a/{b}");
    EXPECT_TRUE(is_endpoint_id("GET /x"));
    EXPECT_FALSE(is_endpoint_id("FETCH /x"));
    EXPECT_FALSE(is_endpoint_id("GET x"));
    EXPECT_FALSE(is_endpoint_id("GET"));
    EXPECT_EQ(parse_http_method("patch"), HttpMethod::PATCH);
    EXPECT_FALSE(parse_http_method("trace"));
}

TEST(SchemaDocuments, RoundTripThroughJson) {
    const Json doc = Json::parse(test::fixture_text("compose/output.schema.json"));
    const auto node = parse_schema_document(doc);
    EXPECT_EQ(node.kind, SchemaKind::object);
    EXPECT_EQ(node.required.size(), 4u);
    EXPECT_EQ(parse_schema_document(schema_to_json(node)), node);
}

TEST(SchemaDocuments, LocalDefsAreResolved) {
    const Json doc = Json::parse(R"({"type": "object", "properties": {"p": {"$ref": "#/$defs/P"}},
                                     "$defs": {"P": {"type": "integer"}}})");
    const auto node = parse_schema_document(doc);
    ASSERT_NE(node.property("p"), nullptr);
    EXPECT_EQ(node.property("p")->kind, SchemaKind::integer);
}
