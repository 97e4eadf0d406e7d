#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "doclens/error.hpp"
#include "doclens/service/api.hpp"
#include "doclens/service/bundle.hpp"
#include "doclens/service/iso_codes.hpp"
#include "doclens/service/pipeline.hpp"
#include "doclens/service/serialize.hpp"
#include "httplib.h"
#include "pipeline_fixture.hpp"
#include "temp_dir.hpp"

using namespace doclens;
using namespace doclens::service;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

json get(const Api& api, const std::string& path, const Query& q = {}, int status = 200) {
  const auto r = api.handle(path, q);
  INFO(path << " -> " << r.body);
  CHECK(r.status == status);
  return json::parse(r.body);
}

const Api& fixture_api() {
  static const Api api(testing::fixture_bundle());
  return api;
}

}  // namespace

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("iso8601 formatting") {
  CHECK(iso8601_utc(0) == "1970-01-01T00:00:00Z");
  CHECK(iso8601_utc(1700000000) == "2023-11-14T22:13:20Z");
  CHECK(humanize("energy_security") == "Energy security");
}

TEST_CASE("iso alpha-2 table") {
  CHECK(codes_sorted());
  CHECK(iso_alpha2_count() == 249);
  for (const char* c : {"AT", "SE", "US", "ZW", "AD"}) CHECK(is_iso_alpha2(c));
  for (const char* c : {"XX", "at", "EU", "UK", "A", "AUT", ""}) CHECK_FALSE(is_iso_alpha2(c));
}

TEST_CASE("artifact json round trips") {
  const auto& b = testing::fixture_bundle();
  const auto& s = b.sections.front();
  CHECK(distances_from_json(to_json(s.distances), "d") == s.distances);
  for (const auto& [algo, variants] : s.clusters) {
    for (const auto& v : variants) CHECK(variant_from_json(to_json(v), "c") == v);
  }
  for (const auto& [method, e] : s.mappings) CHECK(embedding_from_json(to_json(e), "m") == e);
  CHECK(terms_from_json(to_json(s.terms), "t") == s.terms);
  CHECK(correlations_from_json(to_json(s.correlations), "r") == s.correlations);
  for (const auto& sum : s.summaries) CHECK(summary_from_json(to_json(sum), "s") == sum);

  const auto stored = corpus_from_json(read_json_file(testing::fixture_workspace().corpus()), "corpus");
  CHECK(corpus_from_json(to_json(stored), "corpus").corpus == stored.corpus);

  analysis::ManovaReport undefined;
  undefined.num_groups = 1;
  undefined.note = "TooFewGroups: 1 group";
  CHECK(manova_from_json(to_json(undefined), "m") == undefined);
}

TEST_CASE("readers name the offending field") {
  std::string msg;
  CHECK(code_of([] { distances_from_json(json{{"metric", "jsd"}}, "sections/x/distances.json"); }, &msg) ==
        ErrorCode::SchemaViolation);
  CHECK(msg.find("sections/x/distances.json.doc_ids") != std::string::npos);
  CHECK(code_of([] { cluster_from_json(json{{"algorithm", "ward"}, {"labels", {0}}, {"requested_k", 1}}, "c"); }, &msg) ==
        ErrorCode::SchemaViolation);
  CHECK(msg.find("c.algorithm") != std::string::npos);
  json sum = to_json(testing::fixture_bundle().sections[0].summaries[0]);
  sum["selected"] = {999};
  CHECK(code_of([&] { summary_from_json(sum, "s"); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("bundle layout, round trip and byte stability") {
  testing::TempDir dir("bundle");
  const auto& b = testing::fixture_bundle();
  const auto first = dir.path() / "first";
  save_bundle(b, first);

  CHECK(fs::exists(first / "manifest.json"));
  for (const auto& id : b.section_ids()) {
    const auto s = first / "sections" / id;
    for (const char* f : {"model.json", "distances.json", "terms.json", "summaries.json", "correlations.json",
                          "clusters/hierarchical.json", "clusters/kmeans.json", "clusters/hdbscan.json",
                          "mapping/tsne.json", "mapping/mds.json"}) {
      CHECK_MESSAGE(fs::exists(s / f), (s / f).string());
    }
  }

  const auto loaded = load_bundle(first);
  CHECK(loaded == b);
  const auto second = dir.path() / "second";
  save_bundle(loaded, second);
  CHECK(tree_bytes(first) == tree_bytes(second));

  // Saving over an existing bundle replaces it.
  save_bundle(loaded, first);
  CHECK(tree_bytes(first) == tree_bytes(second));
}

TEST_CASE("save refuses dangling references") {
  testing::TempDir dir("dangling");
  std::string msg;

  auto b = testing::fixture_bundle();
  b.sections[0].summaries[0].doc_id = "ZZ";
  CHECK(code_of([&] { save_bundle(b, dir.path() / "a"); }, &msg) == ErrorCode::DanglingReference);
  CHECK(msg.find("'ZZ'") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path() / "a"));

  b = testing::fixture_bundle();
  b.sections[0].model.doc_ids[0] = "QQ";
  b.sections[0].distances.doc_ids[0] = "QQ";
  CHECK(code_of([&] { save_bundle(b, dir.path() / "b"); }, &msg) == ErrorCode::DanglingReference);
  CHECK(msg.find("'QQ'") != std::string::npos);

  b = testing::fixture_bundle();
  b.sections[0].mappings.begin()->second.doc_ids[1] = "AT";
  CHECK(code_of([&] { save_bundle(b, dir.path() / "c"); }) == ErrorCode::DanglingReference);

  b = testing::fixture_bundle();
  b.sections[0].terms.ranking.topics[0][0].term_id = 100000;
  CHECK(code_of([&] { save_bundle(b, dir.path() / "d"); }) == ErrorCode::DanglingReference);

  b = testing::fixture_bundle();
  b.sections[0].correlations.covariates[0] = "population";
  CHECK(code_of([&] { save_bundle(b, dir.path() / "e"); }, &msg) == ErrorCode::DanglingReference);
  CHECK(msg.find("population") != std::string::npos);

  b = testing::fixture_bundle();
  b.sections[0].clusters.begin()->second[0].result.labels.pop_back();
  CHECK(code_of([&] { save_bundle(b, dir.path() / "f"); }) == ErrorCode::DanglingReference);
}

TEST_CASE("save refuses a directory that is not a bundle") {
  testing::TempDir dir("notbundle");
  std::ofstream(dir.path() / "keep.txt") << "user data\n";
  CHECK(code_of([&] { save_bundle(testing::fixture_bundle(), dir.path()); }) == ErrorCode::IoError);
  CHECK(fs::exists(dir.path() / "keep.txt"));
}

TEST_CASE("load rejects foreign versions and damaged files") {
  testing::TempDir dir("damaged");
  const auto path = dir.path() / "b";
  save_bundle(testing::fixture_bundle(), path);
  const auto manifest = slurp(path / "manifest.json");
  std::string msg;

  auto j = json::parse(manifest);
  j["version"] = 99;
  std::ofstream(path / "manifest.json", std::ios::trunc) << j.dump(1) << '\n';
  CHECK(code_of([&] { load_bundle(path); }, &msg) == ErrorCode::VersionMismatch);
  CHECK(msg.find("99") != std::string::npos);
  std::ofstream(path / "manifest.json", std::ios::trunc) << manifest;

  const auto model = path / "sections" / "security" / "model.json";
  const auto full = slurp(model);
  std::ofstream(model, std::ios::trunc) << full.substr(0, full.size() / 2);
  CHECK(code_of([&] { load_bundle(path); }, &msg) == ErrorCode::SchemaViolation);
  CHECK(msg.find("security/model.json") != std::string::npos);
  std::ofstream(model, std::ios::trunc) << full;

  const auto terms = path / "sections" / "security" / "terms.json";
  auto t = json::parse(slurp(terms));
  t.erase("prevalence");
  std::ofstream(terms, std::ios::trunc) << t.dump();
  CHECK(code_of([&] { load_bundle(path); }, &msg) == ErrorCode::SchemaViolation);
  CHECK(msg.find("security/terms.json") != std::string::npos);
}

TEST_CASE("api meta and sections") {
  const auto& api = fixture_api();
  const auto meta = get(api, "/api/meta");
  CHECK(meta["geo"] == true);
  CHECK(meta["sections"] == json({"decarbonisation", "security"}));
  CHECK(meta["documents"].size() == 10);
  CHECK(meta["defaults"]["lambda"] == 0.6);
  CHECK(meta["defaults"]["section"] == "decarbonisation");

  const auto sections = get(api, "/api/sections");
  REQUIRE(sections.size() == 2);
  CHECK(sections[0]["id"] == "decarbonisation");
  CHECK(sections[0]["label"] == "Decarbonisation");
  CHECK(sections[1]["label"] == "Energy security");
  CHECK(sections[0]["clusterings"]["hierarchical"].size() == 3);
  CHECK(sections[0]["mappings"] == json({"tsne", "mds"}));

  auto b = testing::fixture_bundle();
  b.documents[0].entity_id = "Atlantis";
  CHECK(get(Api(b), "/api/meta")["geo"] == false);
}

TEST_CASE("api terms: lambda = 1 ordering equals the phi ordering of /model") {
  const auto& api = fixture_api();
  for (const auto& s : testing::fixture_bundle().sections) {
    const auto model = get(api, "/api/sections/" + s.id + "/model");
    const auto terms = get(api, "/api/sections/" + s.id + "/terms", {{"lambda", "1.0"}});
    for (std::size_t k = 0; k < s.model.num_topics; ++k) {
      const auto& by_phi = model["topics"][k]["top_terms"];
      const auto& by_rel = terms["topics"][k]["terms"];
      for (std::size_t i = 0; i < std::min(by_phi.size(), by_rel.size()); ++i) {
        CHECK(by_phi[i]["term"] == by_rel[i]["term"]);
      }
    }
  }
  const auto dflt = get(api, "/api/sections/security/terms");
  CHECK(dflt["lambda"] == 0.6);
  CHECK(dflt["topics"][0].contains("x"));
  CHECK(dflt["saliency"].size() > 0);
}

TEST_CASE("api compare returns radar and violin payloads") {
  const auto& api = fixture_api();
  const auto& s = testing::fixture_bundle().sections[0];
  const auto r = get(api, "/api/compare", {{"section", s.id}, {"ids", "AT,SE"}});
  REQUIRE(r["documents"].size() == 2);
  CHECK(r["documents"][0]["doc_id"] == "AT");
  CHECK(r["documents"][1]["doc_id"] == "SE");
  CHECK(r["documents"][0]["theta"].size() == s.model.num_topics);
  REQUIRE(r["distributions"].size() == s.model.num_topics);
  for (std::size_t k = 0; k < s.model.num_topics; ++k) {
    const auto& d = r["distributions"][k];
    auto col = s.model.theta.column(k);
    std::sort(col.begin(), col.end());
    CHECK(d["min"] == col.front());
    CHECK(d["max"] == col.back());
    CHECK(d["median"].get<double>() == doctest::Approx((col[4] + col[5]) / 2));
    CHECK(d["q1"].get<double>() <= d["median"].get<double>());
    CHECK(d["values"].size() == 10);
  }
}

TEST_CASE("api clusters, manova and mapping variants") {
  const auto& api = fixture_api();
  const auto c = get(api, "/api/sections/security/clusters", {{"algo", "kmeans"}, {"k", "3"}});
  CHECK(c["params"]["k"] == 3);
  CHECK(c["labels"].size() == 10);
  const auto h = get(api, "/api/sections/security/clusters");
  CHECK(h["algorithm"] == "hierarchical");
  CHECK(h["params"]["k"] == 2);
  CHECK(h["dendrogram"].size() == 9);
  const auto hd = get(api, "/api/sections/security/clusters", {{"algo", "hdbscan"}, {"min_cluster_size", "3"}});
  CHECK(hd["params"]["min_samples"] == 2);

  const auto m = get(api, "/api/sections/security/manova", {{"algo", "hierarchical"}, {"k", "2"}});
  CHECK(m["report"]["num_groups"] == 2);
  CHECK(m["report"].contains("p_value"));

  const auto t = get(api, "/api/sections/security/mapping", {{"method", "tsne"}});
  CHECK(t["points"].size() == 10);
  CHECK(t["perplexity"] == 3.0);
  const auto d = get(api, "/api/sections/security/mapping", {{"method", "mds"}});
  CHECK(d["perplexity"].is_null());
}

TEST_CASE("api errors name the id or parameter") {
  const auto& api = fixture_api();
  auto err = [&](const std::string& path, const Query& q, int status) { return get(api, path, q, status)["error"]; };
  CHECK(err("/api/sections/nope/model", {}, 404)["parameter"] == "section");
  CHECK(err("/api/sections/security/terms", {{"lambda", "1.5"}}, 400)["parameter"] == "lambda");
  CHECK(err("/api/sections/security/terms", {{"lambda", "nan"}}, 400)["parameter"] == "lambda");
  CHECK(err("/api/sections/security/clusters", {{"algo", "ward"}}, 400)["parameter"] == "algo");
  CHECK(err("/api/sections/security/clusters", {{"k", "two"}}, 400)["parameter"] == "k");
  CHECK(err("/api/sections/security/clusters", {{"k", "9"}}, 404)["parameter"] == "k");
  CHECK(err("/api/sections/security/mapping", {{"method", "umap"}}, 400)["parameter"] == "method");
  CHECK(err("/api/compare", {{"section", "security"}}, 400)["parameter"] == "ids");
  CHECK(err("/api/compare", {{"ids", "AT"}}, 400)["parameter"] == "section");
  CHECK(err("/api/compare", {{"section", "security"}, {"ids", "AT,XX"}}, 404)["message"].get<std::string>().find("XX") !=
        std::string::npos);
  CHECK(err("/api/documents/XX/summary", {}, 404)["parameter"] == "id");
  CHECK(err("/api/correlations", {{"section", "nope"}}, 404)["parameter"] == "section");
  CHECK(err("/api/sections/security/terms", {{"lambda", "0.1"}, {"lambda", "0.2"}}, 400)["parameter"] == "lambda");
  CHECK(err("/api/unknown", {}, 404)["status"] == 404);
  CHECK(err("/other", {}, 404)["status"] == 404);
}

TEST_CASE("api summaries and correlations") {
  const auto& api = fixture_api();
  const auto one = get(api, "/api/documents/AT/summary", {{"section", "security"}});
  CHECK(one["path"] == "direct");
  CHECK_FALSE(one["summary"].get<std::string>().empty());
  CHECK(one["keywords"].size() == 10);
  const auto all = get(api, "/api/documents/AT/summary");
  CHECK(all["summaries"].size() == 2);

  const auto corr = get(api, "/api/correlations", {{"section", "security"}});
  CHECK(corr["covariates"] == json({"gdp_per_capita", "renewable_share"}));
  const auto& s = *testing::fixture_bundle().find_section("security");
  CHECK(corr["topics"].size() == s.model.num_topics);
  // One document has no gdp_per_capita.
  CHECK(corr["topics"][0]["cells"][0]["pairs"] == 9);
  CHECK(corr["topics"][0]["cells"][1]["pairs"] == 10);
}

TEST_CASE("api responses are pure functions of the request") {
  const auto& api = fixture_api();
  const Api again(testing::fixture_bundle());
  for (const auto& path : {"/api/meta", "/api/sections", "/api/sections/security/terms", "/api/sections/security/model"}) {
    const auto a = api.handle(path);
    CHECK(a.body == api.handle(path).body);
    CHECK(a.body == again.handle(path).body);
  }
}

TEST_CASE("api rejects defaults the bundle cannot honour") {
  UiDefaults d;
  d.section = "missing";
  CHECK(code_of([&] { Api(testing::fixture_bundle(), d); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("app config parsing") {
  testing::TempDir dir("appcfg");
  std::string msg;
  CHECK(code_of([&] { load_app_config(dir.path() / "missing.json"); }, &msg) == ErrorCode::MissingFile);
  CHECK(msg.find("missing.json") != std::string::npos);

  const auto c = app_config_from_json(json{{"bundle", "out/bundle"}, {"port", 9000}, {"ui", {{"mapping", "mds"}}}},
                                      dir.path());
  CHECK(c.bundle == dir.path() / "out/bundle");
  CHECK(c.port == 9000);
  CHECK(c.ui.mapping == analysis::MappingMethod::MDS);
  CHECK(app_config_from_json(to_json(c), dir.path()).bundle == c.bundle);

  CHECK(code_of([&] { app_config_from_json(json{{"bundle", "b"}, {"port", 70000}}, dir.path()); }, &msg) ==
        ErrorCode::InvalidConfig);
  CHECK(msg.find("port") != std::string::npos);
  CHECK(code_of([&] { app_config_from_json(json{{"port", 80}}, dir.path()); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { app_config_from_json(json{{"bundle", "b"}, {"ui", {{"lambda", 2}}}}, dir.path()); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("http server answers with cors headers") {
  AppConfig config;
  config.port = 0;
  config.cors_origins = {"http://ui.example"};
  ApiServer server(std::make_shared<const Api>(testing::fixture_bundle()), config);
  const int port = server.bind();
  server.start();

  httplib::Client client("127.0.0.1", port);
  auto ok = client.Get("/api/sections", {{"Origin", "http://ui.example"}});
  REQUIRE(ok);
  CHECK(ok->status == 200);
  CHECK(ok->get_header_value("Access-Control-Allow-Origin") == "http://ui.example");
  CHECK(ok->body == fixture_api().handle("/api/sections").body);

  auto other = client.Get("/api/sections", {{"Origin", "http://elsewhere"}});
  REQUIRE(other);
  CHECK_FALSE(other->has_header("Access-Control-Allow-Origin"));

  auto query = client.Get("/api/sections/security/terms?lambda=1.0");
  REQUIRE(query);
  CHECK(query->body == fixture_api().handle("/api/sections/security/terms", {{"lambda", "1.0"}}).body);

  auto missing = client.Get("/api/sections/nope/model");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto preflight = client.Options("/api/meta", {{"Origin", "http://ui.example"}});
  REQUIRE(preflight);
  CHECK(preflight->status == 204);
  CHECK(preflight->get_header_value("Access-Control-Allow-Methods").find("GET") != std::string::npos);
  server.stop();
}

TEST_CASE("pipeline config validation") {
  std::string msg;
  CHECK(code_of([] { pipeline_config_from_json(json{{"fit", {{"k_candidates", json::array()}}}}); }, &msg) ==
        ErrorCode::InvalidConfig);
  CHECK(msg.find("k_candidates") != std::string::npos);
  CHECK(code_of([] { pipeline_config_from_json(json{{"fitt", json::object()}}); }, &msg) == ErrorCode::InvalidConfig);
  CHECK(msg.find("fitt") != std::string::npos);
  CHECK(code_of([] { pipeline_config_from_json(json{{"analysis", {{"relevance", {{"lambda", -1}}}}}}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([] { pipeline_config_from_json(json{{"summarize", {{"embeddings", {{"provider", "x"}}}}}}); }) ==
        ErrorCode::InvalidConfig);
  const auto c = testing::fixture_config();
  CHECK(to_json(pipeline_config_from_json(to_json(c))) == to_json(c));
}

TEST_CASE("stages are resumable") {
  testing::TempDir dir("resume");
  const Workspace ws{dir.path()};
  auto config = testing::fixture_config();
  const StageOptions opts{};
  const auto manifest = testing::fixture_dir() / "text_corpus" / "manifest.json";
  CHECK(run_ingest(manifest, ws, opts) == StageOutcome::Ran);
  CHECK(run_ingest(manifest, ws, opts) == StageOutcome::Skipped);
  CHECK(run_ingest(manifest, ws, StageOptions{true, {}}) == StageOutcome::Ran);

  CHECK(code_of([&] { run_fit(ws, "nope", config, opts); }) == ErrorCode::InvalidConfig);
  CHECK(run_fit(ws, "security", config, opts) == StageOutcome::Ran);
  const auto model_bytes = slurp(ws.model("security"));
  CHECK(run_fit(ws, "security", config, opts) == StageOutcome::Skipped);
  config.fit.seeds = {3};
  CHECK(run_fit(ws, "security", config, opts) == StageOutcome::Ran);

  CHECK(run_analyze(ws, opts) == StageOutcome::Ran);
  CHECK(run_analyze(ws, opts) == StageOutcome::Skipped);
  fs::remove(ws.analysis("security"));
  CHECK(run_analyze(ws, opts) == StageOutcome::Ran);

  summarize::StubLlmClient client;
  CHECK(run_summarize(ws, client, "stub", opts) == StageOutcome::Ran);
  const auto calls = client.calls().size();
  CHECK(run_summarize(ws, client, "stub", opts) == StageOutcome::Skipped);
  CHECK(client.calls().size() == calls);

  const auto out = dir.path() / "bundle";
  CHECK(run_export(ws, out, "2024-01-01T00:00:00Z", opts) == StageOutcome::Ran);
  CHECK(run_export(ws, out, "2024-01-01T00:00:00Z", opts) == StageOutcome::Skipped);
  CHECK(run_export(ws, out, "2025-01-01T00:00:00Z", opts) == StageOutcome::Ran);
  CHECK(load_bundle(out).created == "2025-01-01T00:00:00Z");
  CHECK(load_bundle(out).section_ids() == std::vector<std::string>{"security"});
  (void)model_bytes;
}

TEST_CASE("progress events are json objects with a stage") {
  testing::TempDir dir("progress");
  std::vector<json> events;
  const StageOptions opts{false, [&](const json& e) { events.push_back(e); }};
  run_ingest(testing::fixture_dir() / "text_corpus" / "manifest.json", Workspace{dir.path()}, opts);
  REQUIRE(events.size() == 2);
  CHECK(events[0]["stage"] == "ingest");
  CHECK(events[0]["event"] == "start");
  CHECK(events[1]["event"] == "done");
}

TEST_CASE("undefined manova and short covariates are reported, not thrown") {
  topics::TopicModel m;
  m.method = topics::TopicMethod::NMF;
  m.num_topics = 2;
  m.phi = Matrix::from_rows({{0.5, 0.3, 0.2}, {0.1, 0.3, 0.6}});
  m.theta = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}, {0.6, 0.4}, {0.3, 0.7}});
  m.labels = {"a", "b"};
  m.vocab = {"x", "y", "z"};
  m.doc_ids = {"A", "B", "C", "D"};
  m.doc_lengths = {10, 10, 10, 10};
  corpus::ProcessedCorpus c;
  c.covariate_names = {"gdp"};
  for (const auto& id : m.doc_ids) c.documents.push_back({id, id, {{"gdp", std::nullopt}}});
  c.documents[0].covariates["gdp"] = 1.0;

  AnalysisConfig config;
  config.hierarchical_k = {4};
  config.kmeans_k = {};
  config.hdbscan = {};
  config.tsne = false;
  std::vector<json> skipped;
  config.kmeans_k = {5};
  const auto r = analyze_section(m, c, "s", config, [&](const json& e) { skipped.push_back(e); });
  REQUIRE(r.clusters.count(analysis::ClusterAlgorithm::Hierarchical) == 1);
  const auto& rep = r.clusters.at(analysis::ClusterAlgorithm::Hierarchical)[0].manova;
  CHECK_FALSE(rep.p_value.has_value());
  REQUIRE(rep.note.has_value());
  CHECK(rep.note->find("GroupTooSmall") != std::string::npos);
  CHECK(r.clusters.count(analysis::ClusterAlgorithm::KMeans) == 0);
  REQUIRE(skipped.size() == 1);
  CHECK(skipped[0]["event"] == "variant_skipped");
  REQUIRE(r.correlations.cells.size() == 2);
  CHECK(r.correlations.cells[0][0].pairs == 1);
  CHECK_FALSE(r.correlations.cells[0][0].r.has_value());
  CHECK(r.correlations.cells[0][0].reason == "fewer than 3 paired values");
  CHECK(r.terms.intertopic.rows() == 2);
  CHECK(r.label == "S");
}
