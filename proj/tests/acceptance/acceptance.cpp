// Acceptance checks: one PASS/FAIL line per criterion, exit 1 if any fail.
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "analysis_oracles.hpp"
#include "doclens/analysis/clustering.hpp"
#include "doclens/analysis/divergence.hpp"
#include "doclens/analysis/manova.hpp"
#include "doclens/analysis/mapping.hpp"
#include "doclens/analysis/terms.hpp"
#include "doclens/corpus/vocabulary.hpp"
#include "doclens/rng.hpp"
#include "doclens/service/pipeline.hpp"
#include "doclens/topics/lda.hpp"
#include "doclens/topics/nmf.hpp"
#include "httplib.h"
#include "oracles.hpp"
#include "pipeline_fixture.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

extern char** environ;

namespace fs = std::filesystem;
using namespace doclens;
using nlohmann::json;
using V = std::vector<double>;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects failed expectations for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

Matrix random_thetas(Rng& rng, std::size_t n, std::size_t k) {
  Matrix m(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = testing::random_distribution(rng, k);
    std::copy(d.begin(), d.end(), m.row(i).begin());
  }
  return m;
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

// ------------------------------------------------------------------ criteria

std::string topic_recovery(Check& c) {
  const auto start = Clock::now();
  const auto fixture = testing::load_synthetic(testing::fixture_dir() / "synthetic_topics.json");
  const auto bow = testing::synthetic_bow(fixture);
  topics::LdaParams lp;
  lp.num_topics = 3;
  lp.seed = 1;
  const double lda = testing::mean(testing::greedy_matched_cosines(topics::lda_fit(bow, lp).phi, fixture.true_phi));
  topics::NmfParams np;
  np.num_topics = 3;
  np.seed = 1;
  const double nmf =
      testing::mean(testing::greedy_matched_cosines(topics::nmf_fit(corpus::tfidf(bow), np).phi, fixture.true_phi));
  const double elapsed = seconds_since(start);
  c.expect(fixture.docs.size() == 60 && fixture.true_phi.rows() == 3, "fixture is 60 docs x 3 topics");
  c.expect(lda >= 0.85, "lda mean cosine " + fmt(lda));
  c.expect(nmf >= 0.85, "nmf mean cosine " + fmt(nmf));
  c.expect(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
  return "lda " + fmt(lda) + ", nmf " + fmt(nmf) + ", " + fmt(elapsed) + " s";
}

std::string nmf_monotonicity(Check& c) {
  std::size_t updates = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed * 7);
    Matrix x(12, 9);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t k = 0; k < x.cols(); ++k) x(r, k) = rng.uniform();
    }
    topics::NmfParams p;
    p.num_topics = 3;
    p.seed = seed;
    p.tol = 1e-10;
    p.max_iter = 2000;
    const auto f = topics::nmf_factorize(x, p);
    for (std::size_t i = 1; i < f.errors.size(); ++i) {
      c.expect(f.errors[i] <= f.errors[i - 1], "seed " + std::to_string(seed) + " update " + std::to_string(i));
    }
    updates += f.errors.size();
  }
  return std::to_string(updates) + " recorded errors over 5 seeds";
}

std::string divergence_suite(Check& c) {
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + rng.below(7);
    const auto p = testing::random_distribution(rng, k);
    const auto q = testing::random_distribution(rng, k);
    const auto r = testing::random_distribution(rng, k);
    const std::string at = "triple " + std::to_string(t);
    using analysis::hellinger;
    using analysis::jensen_shannon;
    c.expect(hellinger(p, p) <= 1e-9 && jensen_shannon(p, p) <= 1e-9, at + " identity");
    c.expect(std::abs(hellinger(p, q) - hellinger(q, p)) <= 1e-9, at + " hellinger symmetry");
    c.expect(std::abs(jensen_shannon(p, q) - jensen_shannon(q, p)) <= 1e-9, at + " jsd symmetry");
    c.expect(hellinger(p, q) >= 0.0 && hellinger(p, q) <= 1.0 + 1e-9, at + " hellinger bounds");
    c.expect(jensen_shannon(p, q) >= 0.0 && jensen_shannon(p, q) <= std::numbers::ln2 + 1e-9, at + " jsd bounds");
    c.expect(hellinger(p, r) <= hellinger(p, q) + hellinger(q, r) + 1e-9, at + " hellinger triangle");
    c.expect(std::sqrt(jensen_shannon(p, r)) <= std::sqrt(jensen_shannon(p, q)) + std::sqrt(jensen_shannon(q, r)) + 1e-9,
             at + " sqrt-jsd triangle");
  }
  const V p{0.5, 0.5}, q{0.25, 0.75};
  const double h = analysis::hellinger(p, q), j = analysis::jensen_shannon(p, q);
  c.expect(std::abs(h - testing::hellinger_hp(p, q)) < 5e-7, "hellinger vs exact " + fmt(h));
  c.expect(std::abs(j - testing::jensen_shannon_hp(p, q)) < 5e-7, "jsd vs exact " + fmt(j));
  return "1000 triples; H=" + fmt(h) + ", JSD=" + fmt(j);
}

std::string clustering_oracles(Check& c) {
  Rng rng(77);
  std::size_t agglomerations = 0, trees = 0, runs = 0;
  for (int f = 0; f < 30; ++f) {
    const std::size_t n = 3 + rng.below(8);
    const auto d = analysis::distance_matrix(random_thetas(rng, n, 4), analysis::Metric::JSD);
    for (auto l : {analysis::Linkage::Single, analysis::Linkage::Average, analysis::Linkage::Complete}) {
      for (std::size_t k = 1; k <= n; ++k) {
        const auto got = analysis::agglomerative(d, l, k);
        const auto want = testing::brute_agglomerative(d.values, l, k);
        bool heights = got.dendrogram.size() == want.heights.size();
        for (std::size_t m = 0; heights && m < want.heights.size(); ++m) {
          heights = std::abs(got.dendrogram[m].height - want.heights[m]) <= 1e-12 * std::max(1.0, want.heights[m]);
        }
        c.expect(got.labels == want.labels && heights, "agglomerative fixture " + std::to_string(f));
        ++agglomerations;
      }
    }
  }
  Rng mst_rng(31);
  for (int f = 0; f < 25; ++f) {
    const std::size_t n = 3 + mst_rng.below(5);
    const auto d = analysis::distance_matrix(random_thetas(mst_rng, n, 3), analysis::Metric::Hellinger);
    const Matrix mr = analysis::mutual_reachability(d, 1 + mst_rng.below(3));
    double total = 0.0;
    for (const auto& e : analysis::prim_mst(mr)) total += e.weight;
    const double best = testing::exhaustive_mst_weight(mr);
    c.expect(std::abs(total - best) <= 1e-12 * std::max(1.0, best), "mst fixture " + std::to_string(f));
    ++trees;
  }
  Rng km_rng(5);
  for (int f = 0; f < 10; ++f) {
    const Matrix th = random_thetas(km_rng, 12, 4);
    for (auto space : {analysis::KMeansSpace::Euclidean, analysis::KMeansSpace::Hellinger}) {
      const auto r = analysis::kmeans(th, 3, static_cast<std::uint64_t>(f), 10, space);
      for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) {
        c.expect(r.inertia_trace[i] <= r.inertia_trace[i - 1], "kmeans inertia fixture " + std::to_string(f));
      }
      ++runs;
    }
  }
  return std::to_string(agglomerations) + " agglomerations, " + std::to_string(trees) + " spanning trees, " +
         std::to_string(runs) + " k-means runs";
}

std::string manova_check(Check& c) {
  std::vector<int> labels;
  const Matrix th = testing::planted_manova_fixture(5, 20, labels);
  const auto r = analysis::manova(th, labels);
  const auto o = testing::manova_oracle(th, labels);
  c.expect(r.p_value && *r.p_value < 0.01, "planted p-value");
  c.expect(r.wilks_lambda && std::abs(*r.wilks_lambda - o.lambda) <= 1e-8 * std::max(1.0, o.lambda), "wilks lambda");
  c.expect(r.f_stat && std::abs(*r.f_stat - o.f) <= 1e-8 * std::max(1.0, std::abs(o.f)), "F statistic");
  Rng rng(99);
  int above = 0;
  for (int t = 0; t < 100; ++t) {
    auto shuffled = labels;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
    const auto p = analysis::manova(th, shuffled).p_value;
    if (p && *p > 0.05) ++above;
  }
  c.expect(above >= 90, std::to_string(above) + "/100 permutations above 0.05");
  return "p=" + fmt(r.p_value.value_or(NAN)) + ", lambda=" + fmt(r.wilks_lambda.value_or(NAN)) + ", " +
         std::to_string(above) + "/100 permutations with p > 0.05";
}

std::string tsne_check(Check& c) {
  const auto d = analysis::distance_matrix(testing::six_point_fixture(), analysis::Metric::JSD);
  const Matrix P = analysis::tsne_affinities(d, analysis::default_perplexity(6));
  Rng rng(3);
  Matrix Y(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t k = 0; k < 2; ++k) Y(i, k) = rng.normal();
  }
  const Matrix g = analysis::tsne_gradient(P, Y);
  double worst = 0.0;
  const double h = 1e-5;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      Matrix up = Y, down = Y;
      up(i, k) += h;
      down(i, k) -= h;
      worst = std::max(worst,
                       std::abs((analysis::tsne_kl(P, up) - analysis::tsne_kl(P, down)) / (2 * h) - g(i, k)));
    }
  }
  c.expect(worst < 1e-4, "gradient error " + fmt(worst));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    analysis::TsneParams p;
    p.seed = seed;
    const auto e = analysis::tsne(d, p);
    const std::size_t from = p.exaggeration_iters;
    c.expect(e.trace.size() > from, "trace length");
    for (std::size_t i = from; i < e.trace.size(); ++i) {
      c.expect(e.trace[i] <= e.trace[i - 1] + 1e-6, "seed " + std::to_string(seed) + " step " + std::to_string(i));
    }
  }
  return "max gradient error " + fmt(worst) + "; KL traces checked on 5 seeds";
}

topics::TopicModel hand_model(const std::vector<V>& phi, const std::vector<V>& theta, const V& lengths) {
  topics::TopicModel m;
  m.num_topics = phi.size();
  m.phi = Matrix::from_rows(phi);
  m.theta = Matrix::from_rows(theta);
  m.doc_lengths = lengths;
  for (std::size_t v = 0; v < m.phi.cols(); ++v) m.vocab.push_back("t" + std::to_string(v));
  return m;
}

std::string relevance_check(Check& c) {
  const auto m = hand_model({{0.6, 0.3, 0.1}, {0.2, 0.2, 0.6}}, {{0.7, 0.3}, {0.4, 0.6}}, {30, 10});
  const double pt0 = 25.0 / 40.0, pt1 = 15.0 / 40.0;
  const V pw{0.6 * pt0 + 0.2 * pt1, 0.3 * pt0 + 0.2 * pt1, 0.1 * pt0 + 0.6 * pt1};

  for (double lambda : {0.0, 1.0}) {
    const auto r = analysis::relevance(m, lambda, 3);
    for (std::size_t k = 0; k < 2; ++k) {
      V key(3);
      for (std::size_t v = 0; v < 3; ++v) key[v] = lambda == 1.0 ? m.phi(k, v) : std::log(m.phi(k, v) / pw[v]);
      const auto order = topics::top_indices(key, 3);
      for (std::size_t i = 0; i < 3; ++i) {
        c.expect(r.topics[k][i].term_id == order[i], "lambda " + fmt(lambda) + " order, topic " + std::to_string(k));
      }
    }
  }
  const auto r = analysis::relevance(m, 0.6, 3);
  for (std::size_t k = 0; k < 2; ++k) {
    for (const auto& ts : r.topics[k]) {
      const double phi = m.phi(k, ts.term_id);
      c.expect(std::abs(ts.score - (0.6 * std::log(phi) + 0.4 * std::log(phi / pw[ts.term_id]))) < 1e-10,
               "relevance formula");
    }
  }
  for (const auto& ts : analysis::saliency(m)) {
    const std::size_t v = ts.term_id;
    const double a = m.phi(0, v) * pt0 / pw[v], b = m.phi(1, v) * pt1 / pw[v];
    const double want = pw[v] * (a * std::log(a / pt0) + b * std::log(b / pt1));
    c.expect(std::abs(ts.saliency - want) < 1e-10, "saliency formula, term " + std::to_string(v));
  }
  const auto one = hand_model({{0.4, 0.35, 0.25}}, {{1.0}, {1.0}}, {5, 9});
  for (const auto& ts : analysis::saliency(one)) c.expect(ts.saliency == 0.0, "K=1 saliency");
  return "extremes, formulas and K=1 checked";
}

/// Fresh workspace through every offline stage, exported to `out`.
void offline_pipeline(const fs::path& root, const fs::path& out, std::size_t& calls, std::size_t& over_budget,
                      std::size_t& extractive) {
  auto config = testing::fixture_config();
  config.summarize.options.abstractive.word_budget = 60;
  const service::Workspace ws{root};
  const service::StageOptions opts{};
  service::run_ingest(testing::fixture_dir() / "text_corpus" / "manifest.json", ws, opts);
  service::run_fit(ws, "all", config, opts);
  service::run_analyze(ws, opts);
  summarize::StubLlmClient client({.fail_first = 0, .word_budget = 60});
  service::run_summarize(ws, client, "stub", opts);
  for (const auto& call : client.calls()) {
    ++calls;
    if (call.task == summarize::LlmTask::Summarize && call.source_words > 60) ++over_budget;
  }
  over_budget += client.budget_violations();
  service::run_export(ws, out, "2024-01-01T00:00:00Z", opts);
  for (const auto& s : service::load_bundle(out).sections) {
    for (const auto& sum : s.summaries) extractive += sum.path == summarize::SummaryPath::Extractive;
  }
}

std::string offline_summarization(Check& c) {
  testing::TempDir dir("accept-offline");
  std::size_t calls = 0, over = 0, extractive = 0;
  offline_pipeline(dir.path() / "ws1", dir.path() / "bundle1", calls, over, extractive);
  offline_pipeline(dir.path() / "ws2", dir.path() / "bundle2", calls, over, extractive);
  const auto a = tree_bytes(dir.path() / "bundle1");
  const auto b = tree_bytes(dir.path() / "bundle2");
  c.expect(!a.empty() && a == b, "bundles differ");
  c.expect(over == 0, std::to_string(over) + " calls over the word budget");
  c.expect(extractive > 0, "no section took the extractive path");
  return std::to_string(a.size()) + " identical files; " + std::to_string(calls) + " llm calls, " +
         std::to_string(extractive / 2) + " extractive summaries per run";
}

// ------------------------------------------------------------ cli end to end

int run_cli(const std::vector<std::string>& args, const fs::path& err, pid_t* background = nullptr) {
  std::vector<std::string> full{DOCLENS_BIN};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : full) argv.push_back(a.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 2, err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return -1;
  if (background) {
    *background = pid;
    return 0;
  }
  int status = 0;
  waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Every document id and section id mentioned anywhere in `j` must exist.
void check_references(const json& j, const std::set<std::string>& docs, const std::set<std::string>& sections,
                      const std::string& where, Check& c) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if ((key == "doc_id" || key == "document") && value.is_string()) {
        c.expect(docs.count(value.get<std::string>()) == 1, where + " dangling doc_id " + value.get<std::string>());
      }
      if (key == "section" && value.is_string()) {
        c.expect(sections.count(value.get<std::string>()) == 1, where + " dangling section " + value.get<std::string>());
      }
      check_references(value, docs, sections, where, c);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) check_references(v, docs, sections, where, c);
  }
}

std::string cli_end_to_end(Check& c) {
  const auto start = Clock::now();
  testing::TempDir dir("accept-cli");
  const auto ws = dir.path() / "ws";
  const auto bundle = dir.path() / "bundle";
  const auto err = dir.path() / "stderr.txt";
  const auto fixtures = testing::fixture_dir();

  const std::vector<std::vector<std::string>> stages{
      {"ingest", "--manifest", (fixtures / "text_corpus" / "manifest.json").string(), "--out", ws.string()},
      {"fit", "--corpus", ws.string(), "--config", (fixtures / "pipeline_config.json").string()},
      {"analyze", "--models", (ws / "models").string()},
      {"summarize", "--corpus", ws.string(), "--stub"},
      {"export", "--workspace", ws.string(), "--out", bundle.string(), "--timestamp", "2024-01-01T00:00:00Z"}};
  for (const auto& args : stages) {
    const int status = run_cli(args, err);
    c.expect(status == 0, args[0] + " exited " + std::to_string(status) + ": " + slurp(err));
    if (status != 0) return "stage " + args[0] + " failed";
  }

  const auto app_config = dir.path() / "app.json";
  std::ofstream(app_config) << json{{"bundle", bundle.string()}, {"port", 0}}.dump();
  pid_t server = 0;
  const auto server_err = dir.path() / "server.txt";
  run_cli({"run-app", "--config", app_config.string()}, server_err, &server);
  int port = 0;
  for (int i = 0; i < 200 && port == 0; ++i) {
    std::istringstream lines(slurp(server_err));
    std::string line;
    while (std::getline(lines, line)) {
      const auto e = json::parse(line, nullptr, false);
      if (!e.is_discarded() && e.value("event", "") == "listening") port = e["port"].get<int>();
    }
    if (port == 0) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  c.expect(port != 0, "server never reported listening: " + slurp(server_err));
  std::size_t requests = 0;
  if (port != 0) {
    httplib::Client client("127.0.0.1", port);
    auto get = [&](const std::string& url) -> json {
      auto first = client.Get(url);
      auto second = client.Get(url);
      requests += 2;
      if (!first || !second) {
        c.expect(false, url + " request failed");
        return json();
      }
      c.expect(first->status == 200, url + " status " + std::to_string(first->status));
      c.expect(first->body == second->body, url + " bodies differ");
      return json::parse(first->body, nullptr, false);
    };

    std::vector<std::pair<std::string, json>> pages;
    const auto meta = get("/api/meta");
    std::set<std::string> docs, sections;
    for (const auto& d : meta["documents"]) docs.insert(d["doc_id"].get<std::string>());
    for (const auto& s : meta["sections"]) sections.insert(s.get<std::string>());
    c.expect(docs.size() == 10 && sections.size() == 2, "meta lists 10 documents and 2 sections");
    pages.emplace_back("/api/meta", meta);
    const auto list = get("/api/sections");
    pages.emplace_back("/api/sections", list);

    std::string ids;
    for (const auto& d : docs) ids += (ids.empty() ? "" : ",") + d;
    for (const auto& s : list) {
      const std::string id = s["id"];
      const std::string base = "/api/sections/" + id;
      for (const auto& url : {base + "/model", base + "/terms", base + "/terms?lambda=0", base + "/terms?lambda=1",
                              "/api/correlations?section=" + id, "/api/compare?section=" + id + "&ids=" + ids}) {
        pages.emplace_back(url, get(url));
      }
      for (const auto& m : s["mappings"]) {
        const std::string url = base + "/mapping?method=" + m.get<std::string>();
        const auto page = get(url);
        c.expect(page["points"].size() == docs.size(), url + " covers every document");
        pages.emplace_back(url, page);
      }
      for (const auto& [algo, variants] : s["clusterings"].items()) {
        for (const auto& v : variants) {
          std::string query = "?algo=" + algo;
          if (v.contains("k")) query += "&k=" + std::to_string(v["k"].get<int>());
          if (v.contains("min_cluster_size")) {
            query += "&min_cluster_size=" + std::to_string(v["min_cluster_size"].get<int>()) +
                     "&min_samples=" + std::to_string(v["min_samples"].get<int>());
          }
          const auto clusters = get(base + "/clusters" + query);
          c.expect(clusters["labels"].size() == docs.size(), base + "/clusters" + query + " covers every document");
          c.expect(clusters["params"] == v, base + "/clusters" + query + " returns the requested variant");
          pages.emplace_back(base + "/clusters" + query, clusters);
          pages.emplace_back(base + "/manova" + query, get(base + "/manova" + query));
        }
      }
    }
    for (const auto& d : docs) {
      pages.emplace_back("/api/documents/" + d + "/summary", get("/api/documents/" + d + "/summary"));
    }
    for (const auto& [url, page] : pages) {
      c.expect(!page.is_discarded() && !page.is_null(), url + " is not json");
      check_references(page, docs, sections, url, c);
    }
    kill(server, SIGTERM);
  }
  if (server > 0) {
    int status = 0;
    waitpid(server, &status, 0);
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 300.0, "runtime " + fmt(elapsed) + " s");
  return std::to_string(requests) + " GETs, " + fmt(elapsed) + " s";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string(Check&)>>> criteria{
      {"topic recovery", topic_recovery},
      {"nmf monotonicity", nmf_monotonicity},
      {"divergence suite", divergence_suite},
      {"clustering oracles", clustering_oracles},
      {"manova", manova_check},
      {"tsne gradient and trace", tsne_check},
      {"relevance and saliency", relevance_check},
      {"offline hybrid summarization", offline_summarization},
      {"cli end to end", cli_end_to_end},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    std::string detail;
    try {
      detail = run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("threw: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail;
    for (const auto& f : c.failures) std::cout << " | " << f;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
