#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "apicompose/error.hpp"
#include "apicompose/harness.hpp"
#include "test_support.hpp"

using namespace apicompose;

namespace {

constexpr const char* kPingSpec = R"(openapi: 3.0.3
info: {title: Ping Service, version: "1"}
paths:
  /ping:
    get:
      responses:
        "200":
          description: pong
          content:
            application/json:
              schema:
                type: object
                required: [ok]
                properties:
                  ok: {type: boolean}
)";

constexpr const char* kPrecedenceSpec = R"(openapi: 3.0.3
info: {title: Precedence, version: "1"}
paths:
  /pets/{petId}:
    get: {responses: {"200": {description: ok}}}
  /pets/mine:
    get: {responses: {"200": {description: ok}}}
  /{a}/{b}:
    get: {responses: {"200": {description: ok}}}
)";

CompositionArtifact python_artifact(const std::string& code) {
    CompositionArtifact a;
    a.code_text = code;
    a.runtime_label = "Python";
    a.model_id = "test";
    return a;
}

ServiceSpec inventory() { return load_spec_file(test::fixture("compose/inventory.yaml")); }

SchemaNode output_schema() {
    return parse_schema_document(Json::parse(test::fixture_text("compose/output.schema.json")));
}

bool have_python() {
    const auto r = run_process(test::python_interpreter() + " -c 'print(1)'", {}, std::chrono::seconds(10));
    return r.exit_status && *r.exit_status == 0;
}

ScoreRequest score_request(const MockService& mock) {
    ScoreRequest req;
    req.runner_command = test::python_interpreter() + " {code_file} {input_file}";
    req.mocks = {&mock};
    req.input_document = Json{{"itemId", "item-7"}, {"quantity", 2}};
    req.expected_endpoint_ids = {"GET /items/{itemId}", "POST /orders"};
    req.output_schema = output_schema();
    req.timeout = std::chrono::seconds(30);
    return req;
}

}  // namespace

TEST(SynthesizeExample, ExplicitExample) {
    SchemaNode s;
    s.kind = SchemaKind::string;
    s.example = Json("abc");
    EXPECT_EQ(synthesize_example(s), Json("abc"));
}

TEST(SynthesizeExample, RequiredPropertiesOnly) {
    const auto s = parse_schema_document(
        Json::parse(R"({"type":"object","required":["id"],"properties":{"id":{"type":"integer"},"name":{"type":"string"}}})"));
    EXPECT_EQ(synthesize_example(s).dump(), R"({"id":0})");
}

TEST(SynthesizeExample, EnumAndTypeDefaults) {
    const auto s = parse_schema_document(Json::parse(
        R"({"type":"object","required":["a","b","c","d","e"],"properties":{
            "a":{"type":"string","enum":["x","y"]},"b":{"type":"number"},"c":{"type":"boolean"},
            "d":{"type":"array","items":{"type":"string"}},"e":{"type":"string"}}})"));
    const auto v = synthesize_example(s);
    EXPECT_EQ(v["a"], "x");
    EXPECT_EQ(v["b"], 0.0);
    EXPECT_EQ(v["c"], false);
    EXPECT_TRUE(v["d"].is_array());
    EXPECT_EQ(v["e"], "string");
    EXPECT_TRUE(conforms(v, s));
}

TEST(SynthesizeExample, RecursiveSchemaTerminates) {
    const auto spec = load_spec_file(test::fixture("recursive.yaml"));
    for (const auto& ep : spec.endpoints) {
        const auto [status, schema] = success_response(ep);
        ASSERT_NE(schema, nullptr);
        const auto v = synthesize_example(*schema);
        EXPECT_TRUE(conforms(v, *schema)) << ep.endpoint_id;
    }
}

TEST(Conforms, ReportsOffendingLocation) {
    const auto s = parse_schema_document(Json::parse(
        R"({"type":"object","required":["n"],"properties":{"n":{"type":"integer"}}})"));
    std::string why;
    EXPECT_TRUE(conforms(Json::parse(R"({"n":3})"), s));
    EXPECT_FALSE(conforms(Json::parse(R"({})"), s, &why));
    EXPECT_NE(why.find("n"), std::string::npos);
    EXPECT_FALSE(conforms(Json::parse(R"({"n":"3"})"), s, &why));
    EXPECT_FALSE(conforms(Json::parse(R"({"n":3.5})"), s));
    EXPECT_FALSE(conforms(Json::array(), s));
}

TEST(MatchRequest, PetStore) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    EXPECT_EQ(match_request(spec, HttpMethod::GET, "/pets/7"), "GET /pets/{petId}");
    EXPECT_EQ(match_request(spec, "delete", "/pets/7"), "DELETE /pets/{petId}");
    EXPECT_EQ(match_request(spec, HttpMethod::POST, "/pets/7/adopt"), "POST /pets/{petId}/adopt");
    EXPECT_EQ(match_request(spec, HttpMethod::POST, "/pets/7"), std::nullopt);
    EXPECT_EQ(match_request(spec, HttpMethod::GET, "/pets/"), std::nullopt);
    EXPECT_EQ(match_request(spec, HttpMethod::GET, "/owners"), std::nullopt);
    EXPECT_EQ(match_request(spec, "BREW", "/pets"), std::nullopt);
}

TEST(MatchRequest, LiteralSegmentsWin) {
    const auto spec = parse_spec(kPrecedenceSpec);
    EXPECT_EQ(match_request(spec, HttpMethod::GET, "/pets/mine"), "GET /pets/mine");
    EXPECT_EQ(match_request(spec, HttpMethod::GET, "/pets/9"), "GET /pets/{petId}");
    EXPECT_EQ(match_request(spec, HttpMethod::GET, "/cats/9"), "GET /{a}/{b}");
}

TEST(StaticScan, Literals) {
    const std::vector<ServiceSpec> specs = {load_spec_file(test::fixture("petstore.yaml"))};
    EXPECT_EQ(static_endpoint_scan(R"(url = "http://h:1/pets/7")", specs),
              (std::set<std::string>{"DELETE /pets/{petId}", "GET /pets/{petId}"}));
    EXPECT_EQ(static_endpoint_scan(R"(requests.post(BASE + "/pets", json=p))", specs),
              (std::set<std::string>{"POST /pets"}));
    EXPECT_EQ(static_endpoint_scan(R"(requests.get(f"{BASE}/pets/" + pid))", specs),
              (std::set<std::string>{"GET /pets/{petId}"}));
    EXPECT_TRUE(static_endpoint_scan("x = 1\nprint(x)\n", specs).empty());
    EXPECT_TRUE(static_endpoint_scan(R"(print("/unknown/path"))", specs).empty());
}

TEST(StaticScan, SubsetOfSpecIds) {
    const std::vector<ServiceSpec> specs = {load_spec_file(test::fixture("petstore.yaml")), inventory()};
    std::set<std::string> known;
    for (const auto& s : specs) {
        for (const auto& id : list_endpoints(s)) known.insert(id);
    }
    const auto code = test::fixture_text("compose/correct.py") + test::fixture_text("compose/wrong.py") +
                      "\n'/pets/1/adopt' '/nothing' \"/items\" '/a/b/c/d'\n";
    for (const auto& id : static_endpoint_scan(code, specs)) EXPECT_TRUE(known.count(id)) << id;
}

TEST(MockService, ServesAndLogs) {
    auto mock = MockService::start(parse_spec(kPingSpec));
    httplib::Client client("127.0.0.1", mock->port());
    auto res = client.Get("/ping");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(Json::parse(res->body), Json::parse(R"({"ok":false})"));

    auto missing = client.Get("/nope");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);

    const auto log = mock->log();
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log[0].seq, 1u);
    EXPECT_EQ(log[0].method, "GET");
    EXPECT_EQ(log[0].matched_endpoint_id, "GET /ping");
    EXPECT_EQ(log[0].status_returned, 200);
    EXPECT_EQ(log[1].matched_endpoint_id, std::nullopt);
    EXPECT_EQ(log[1].status_returned, 404);
    EXPECT_TRUE(to_json(log[1])["matched_endpoint_id"].is_null());
    EXPECT_EQ(mock->base_url(), "http://127.0.0.1:" + std::to_string(mock->port()));
}

TEST(MockService, ResponsesConformForPetStore) {
    const auto spec = load_spec_file(test::fixture("petstore.yaml"));
    auto mock = MockService::start(spec);
    for (const auto& ep : spec.endpoints) {
        const auto [status, schema] = success_response(ep);
        const auto [served_status, body] = mock->canned_response(ep.endpoint_id);
        EXPECT_EQ(served_status, status);
        EXPECT_GE(status, 200);
        EXPECT_LT(status, 300);
        if (schema) EXPECT_TRUE(conforms(body, *schema)) << ep.endpoint_id;
    }
    EXPECT_EQ(mock->canned_response("POST /pets").first, 201);
}

TEST(MockService, ConcurrentRequestsGetDistinctSequenceNumbers) {
    auto mock = MockService::start(parse_spec(kPingSpec));
    std::vector<std::thread> threads;
    for (int t = 0; t < 10; ++t) {
        threads.emplace_back([&] {
            httplib::Client client("127.0.0.1", mock->port());
            for (int i = 0; i < 10; ++i) {
                auto res = client.Get("/ping");
                EXPECT_TRUE(res && res->status == 200);
            }
        });
    }
    for (auto& t : threads) t.join();
    const auto log = mock->log();
    ASSERT_EQ(log.size(), 100u);
    std::vector<std::size_t> seqs;
    for (const auto& r : log) seqs.push_back(r.seq);
    std::sort(seqs.begin(), seqs.end());
    for (std::size_t i = 0; i < seqs.size(); ++i) EXPECT_EQ(seqs[i], i + 1);
}

TEST(MockService, StopIsIdempotent) {
    auto mock = MockService::start(parse_spec(kPingSpec));
    mock->stop();
    mock->stop();
    httplib::Client client("127.0.0.1", mock->port());
    client.set_connection_timeout(1);
    EXPECT_FALSE(client.Get("/ping"));
}

TEST(RunProcess, CapturesOutputAndEnvironment) {
    const auto r = run_process("echo \"$GREETING\"; echo err >&2; exit 3", {{"GREETING", "hello"}},
                               std::chrono::seconds(10));
    EXPECT_EQ(r.exit_status, 3);
    EXPECT_EQ(r.stdout_text, "hello\n");
    EXPECT_EQ(r.stderr_text, "err\n");
    EXPECT_FALSE(r.timed_out);
}

TEST(RunProcess, Timeout) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_process("sleep 30", {}, std::chrono::milliseconds(200));
    EXPECT_TRUE(r.timed_out);
    EXPECT_FALSE(r.exit_status);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(RunAndScore, CorrectComposition) {
    if (!have_python()) GTEST_SKIP() << "python interpreter unavailable";
    auto mock = MockService::start(inventory());
    const auto report =
        run_and_score(python_artifact(test::fixture_text("compose/correct.py")), score_request(*mock));
    EXPECT_DOUBLE_EQ(report.static_coverage, 1.0);
    ASSERT_TRUE(report.dynamic_coverage);
    EXPECT_DOUBLE_EQ(*report.dynamic_coverage, 1.0);
    EXPECT_EQ(report.output_schema_valid, true);
    EXPECT_EQ(report.exit_status, 0);
    EXPECT_TRUE(report.extraneous_invocations->empty());
    EXPECT_EQ(report.unmatched_requests, 0u);
}

TEST(RunAndScore, UnrelatedComposition) {
    if (!have_python()) GTEST_SKIP() << "python interpreter unavailable";
    auto mock = MockService::start(inventory());
    const auto report =
        run_and_score(python_artifact(test::fixture_text("compose/wrong.py")), score_request(*mock));
    EXPECT_DOUBLE_EQ(report.static_coverage, 0.0);
    EXPECT_DOUBLE_EQ(report.dynamic_coverage.value(), 0.0);
    EXPECT_EQ(report.output_schema_valid, false);
    EXPECT_EQ(*report.extraneous_invocations, std::set<std::string>{"GET /warehouses"});
}

TEST(RunAndScore, HalfCoverageWithExtraneousCall) {
    if (!have_python()) GTEST_SKIP() << "python interpreter unavailable";
    auto mock = MockService::start(inventory());
    const std::string code = R"(import os, urllib.request
base = os.environ["SERVICE_URL_INVENTORY_SERVICE"]
urllib.request.urlopen(base + "/items/item-7").read()
urllib.request.urlopen(base + "/warehouses").read()
urllib.request.urlopen(base + "/not-there").read() if False else None
print("{}")
)";
    const auto report = run_and_score(python_artifact(code), score_request(*mock));
    EXPECT_DOUBLE_EQ(report.dynamic_coverage.value(), 0.5);
    EXPECT_EQ(report.extraneous_invocations->size(), 1u);
    EXPECT_EQ(report.invoked_endpoint_ids->size(), 2u);
}

TEST(RunAndScore, NoCallsAndTimeout) {
    if (!have_python()) GTEST_SKIP() << "python interpreter unavailable";
    auto mock = MockService::start(inventory());
    auto req = score_request(*mock);
    const auto idle = run_and_score(python_artifact("print('{}')\n"), req);
    EXPECT_DOUBLE_EQ(idle.dynamic_coverage.value(), 0.0);
    EXPECT_DOUBLE_EQ(idle.static_coverage, 0.0);

    req.timeout = std::chrono::milliseconds(300);
    const auto slow = run_and_score(python_artifact("import time\ntime.sleep(30)\n"), req);
    EXPECT_EQ(slow.runner_error, "RunnerTimeout");
    EXPECT_FALSE(slow.dynamic_coverage);
}

TEST(RunAndScore, RejectsRunnerWithoutPlaceholders) {
    auto mock = MockService::start(inventory());
    auto req = score_request(*mock);
    req.runner_command = "python3 main.py";
    try {
        run_and_score(python_artifact("print(1)"), req);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}
