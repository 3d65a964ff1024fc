#include <gtest/gtest.h>

#include "apicompose/chunking.hpp"
#include "apicompose/error.hpp"
#include "apicompose/spec_model.hpp"
#include "test_support.hpp"

using namespace apicompose;

namespace {

std::vector<ServiceSpec> all_fixtures() {
    std::vector<ServiceSpec> out;
    for (const char* name : {"petstore.yaml", "nested_refs.yaml", "recursive.yaml", "compose/inventory.yaml"})
        out.push_back(load_spec_file(test::fixture(name)));
    return out;
}

const char* kThreeEndpoints = R"(
openapi: 3.0.0
info: {title: Library, version: "1"}
paths:
  /books:
    get:
      summary: List books
      responses:
        "200":
          description: ok
          content:
            application/json:
              schema:
                type: array
                items: {type: object, properties: {isbnCode: {type: string}, pageCount: {type: integer}}}
    post:
      summary: Add a book
      requestBody:
        content:
          application/json:
            schema: {type: object, properties: {shelfLabel: {type: string}}}
      responses: {"201": {description: created}}
  /books/{bookId}:
    delete:
      summary: Remove a book
      responses: {"204": {description: gone}}
)";

}  // namespace

TEST(ChunkSpec, SingleEndpointFullChunk) {
    const auto spec = resolve_refs(parse_spec(R"({"openapi": "3.0.0", "info": {"title": "Ping Service", "version": "1"},
        "paths": {"/ping": {"get": {"responses": {"200": {"description": "ok"}}}}}})"));
    const auto chunks = chunk_spec(spec, ChunkStrategy::endpoint_full);
    ASSERT_EQ(chunks.size(), 1u);
    EXPECT_NE(chunks[0].text.find("GET"), std::string::npos);
    EXPECT_NE(chunks[0].text.find("/ping"), std::string::npos);
    EXPECT_NE(chunks[0].text.find("Ping Service"), std::string::npos);
    EXPECT_EQ(chunks[0].chunk_id, "ping-service#GET /ping#endpoint_full");
    EXPECT_EQ(chunks[0].endpoint_id.value_or(""), "GET /ping");
}

TEST(ChunkSpec, LeanChunksOmitSchemaPropertyNames) {
    const auto spec = resolve_refs(parse_spec(kThreeEndpoints));
    const auto lean = chunk_spec(spec, ChunkStrategy::endpoint_lean);
    ASSERT_EQ(lean.size(), 3u);
    for (const auto& c : lean) {
        for (const char* prop : {"isbnCode", "pageCount", "shelfLabel"})
            EXPECT_EQ(c.text.find(prop), std::string::npos) << c.chunk_id << " mentions " << prop;
    }
    const auto full = chunk_spec(spec, ChunkStrategy::endpoint_full);
    EXPECT_NE(full[0].text.find("isbnCode"), std::string::npos);
}

TEST(ChunkSpec, WholeSpecIsOneChunk) {
    for (const auto& spec : all_fixtures()) {
        const auto chunks = chunk_spec(spec, ChunkStrategy::whole_spec);
        ASSERT_EQ(chunks.size(), 1u);
        EXPECT_TRUE(chunks[0].chunk_id.ends_with("#__whole__#whole_spec")) << chunks[0].chunk_id;
        EXPECT_FALSE(chunks[0].endpoint_id);
        for (const auto& e : spec.endpoints) EXPECT_NE(chunks[0].text.find(e.path), std::string::npos);
    }
}

TEST(ChunkSpec, EmptySpecRejectedForEndpointStrategies) {
    const auto spec = parse_spec(R"({"openapi": "3.0.0", "info": {"title": "e", "version": "1"}, "paths": {}})");
    for (auto s : {ChunkStrategy::endpoint_full, ChunkStrategy::endpoint_lean}) {
        try {
            chunk_spec(spec, s);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::EmptySpec);
        }
    }
}

TEST(ChunkSpec, InvariantsOverFixtures) {
    for (const auto& spec : all_fixtures()) {
        const auto full = chunk_spec(spec, ChunkStrategy::endpoint_full);
        const auto lean = chunk_spec(spec, ChunkStrategy::endpoint_lean);
        ASSERT_EQ(full.size(), spec.endpoints.size());
        ASSERT_EQ(lean.size(), spec.endpoints.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            const auto& e = spec.endpoints[i];
            for (const auto* c : {&full[i], &lean[i]}) {
                EXPECT_EQ(c->endpoint_id.value_or(""), e.endpoint_id);
                EXPECT_NE(c->text.find(std::string(to_string(e.method))), std::string::npos);
                EXPECT_NE(c->text.find(e.path), std::string::npos);
                EXPECT_EQ(c->token_estimate, count_tokens(c->text));
            }
            EXPECT_LE(lean[i].token_estimate, full[i].token_estimate) << e.endpoint_id;
        }
    }
}

TEST(ChunkSpec, DeterministicAndJsonlRoundTrip) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    for (auto s : {ChunkStrategy::whole_spec, ChunkStrategy::endpoint_full, ChunkStrategy::endpoint_lean}) {
        const auto a = chunk_spec(spec, s);
        EXPECT_EQ(a, chunk_spec(spec, s));
        const auto text = chunks_to_jsonl(a);
        EXPECT_EQ(chunks_from_jsonl(text), a);
    }
    EXPECT_THROW(chunks_from_jsonl("{broken\n"), Error);
}

TEST(ChunkSpec, RecursiveSchemaOutlineTerminates) {
    const auto spec = load_spec_file(test::fixture("recursive.yaml"));
    const auto chunks = chunk_spec(spec, ChunkStrategy::endpoint_full);
    EXPECT_NE(chunks[0].text.find("<recursive:Node>"), std::string::npos) << chunks[0].text;
}

TEST(ChunkSpec, OutlineDepthIsCapped) {
    const auto spec = load_spec_file(test::fixture("nested_refs.yaml"));
    const auto outline = render_schema_outline(spec.endpoints[0].response_schemas.at("200"));
    EXPECT_NE(outline.find("..."), std::string::npos) << outline;
    EXPECT_EQ(outline.find("deepest"), std::string::npos);
}

TEST(ChunkStrategyNames, ParseAndPrint) {
    for (auto s : {ChunkStrategy::whole_spec, ChunkStrategy::endpoint_full, ChunkStrategy::endpoint_lean})
        EXPECT_EQ(parse_chunk_strategy(to_string(s)), s);
    EXPECT_THROW(parse_chunk_strategy("paragraphs"), Error);
}
