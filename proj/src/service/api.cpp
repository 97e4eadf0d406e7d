#include "doclens/service/api.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "doclens/error.hpp"
#include "doclens/service/iso_codes.hpp"
#include "doclens/service/serialize.hpp"

namespace doclens::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kTopTerms = 20;
constexpr std::size_t kTopSalient = 30;
constexpr std::size_t kKeywords = 10;

/// Thrown inside handlers and turned into an error response.
struct HttpError {
  int status;
  std::string message;
  std::string parameter;
};

[[noreturn]] void not_found(const std::string& what, const std::string& parameter = {}) {
  throw HttpError{404, what, parameter};
}
[[noreturn]] void bad_request(const std::string& what, const std::string& parameter) {
  throw HttpError{400, what, parameter};
}

std::optional<std::string> param(const Query& q, const std::string& name) {
  auto [lo, hi] = q.equal_range(name);
  if (lo == hi) return std::nullopt;
  if (std::next(lo) != hi) bad_request("parameter '" + name + "' given more than once", name);
  return lo->second;
}

std::string required(const Query& q, const std::string& name) {
  auto v = param(q, name);
  if (!v || v->empty()) bad_request("missing parameter '" + name + "'", name);
  return *v;
}

double parse_double(const std::string& s, const std::string& name) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    bad_request("parameter '" + name + "' is not a number: '" + s + "'", name);
  }
  return v;
}

std::size_t parse_size(const std::string& s, const std::string& name) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    bad_request("parameter '" + name + "' is not a non-negative integer: '" + s + "'", name);
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

json topic_refs(const topics::TopicModel& m) {
  json out = json::array();
  for (std::size_t k = 0; k < m.num_topics; ++k) out.push_back({{"topic", k}, {"label", m.labels[k]}});
  return out;
}

std::size_t doc_row(const SectionResults& s, const std::string& doc_id) {
  const auto& ids = s.model.doc_ids;
  auto it = std::find(ids.begin(), ids.end(), doc_id);
  if (it == ids.end()) return ids.size();
  return static_cast<std::size_t>(it - ids.begin());
}

/// Linear-interpolation quantile of sorted values.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

json variant_key(const analysis::ClusterResult& r) {
  using analysis::ClusterAlgorithm;
  json j{{"num_clusters", r.num_clusters()}};
  switch (r.algorithm) {
    case ClusterAlgorithm::Hierarchical:
      j["k"] = r.requested_k;
      j["linkage"] = analysis::to_string(r.linkage);
      break;
    case ClusterAlgorithm::KMeans:
      j["k"] = r.requested_k;
      j["space"] = analysis::to_string(r.space);
      break;
    case ClusterAlgorithm::Hdbscan:
      j["min_cluster_size"] = r.min_cluster_size;
      j["min_samples"] = r.min_samples;
      break;
  }
  return j;
}

class Router {
 public:
  Router(const AnalysisBundle& b, const UiDefaults& d) : b_(b), d_(d) {}

  json route(const std::vector<std::string>& parts, const Query& q) const {
    // parts[0] == "api"
    if (parts.size() == 2 && parts[1] == "meta") return meta();
    if (parts.size() == 2 && parts[1] == "sections") return sections();
    if (parts.size() == 4 && parts[1] == "sections") {
      const auto& s = section(parts[2]);
      if (parts[3] == "model") return model(s);
      if (parts[3] == "terms") return terms(s, q);
      if (parts[3] == "clusters") return clusters(s, q);
      if (parts[3] == "mapping") return mapping(s, q);
      if (parts[3] == "manova") return manova(s, q);
    }
    if (parts.size() == 4 && parts[1] == "documents" && parts[3] == "summary") return summary(parts[2], q);
    if (parts.size() == 2 && parts[1] == "compare") return compare(q);
    if (parts.size() == 2 && parts[1] == "correlations") return correlations(q);
    not_found("no such endpoint");
  }

 private:
  const SectionResults& section(const std::string& id) const {
    const auto* s = b_.find_section(id);
    if (!s) not_found("unknown section '" + id + "'", "section");
    return *s;
  }

  const SectionResults& section_param(const Query& q) const {
    const auto id = required(q, "section");
    const auto* s = b_.find_section(id);
    if (!s) not_found("unknown section '" + id + "'", "section");
    return *s;
  }

  json meta() const {
    bool geo = !b_.documents.empty();
    json docs = json::array();
    for (const auto& d : b_.documents) {
      const bool iso = is_iso_alpha2(d.entity_id);
      geo = geo && iso;
      json sections = json::array();
      for (const auto& s : b_.sections) {
        if (doc_row(s, d.doc_id) < s.model.doc_ids.size()) sections.push_back(s.id);
      }
      json entry = to_json(d);
      entry["geo"] = iso;
      entry["sections"] = sections;
      docs.push_back(entry);
    }
    const std::string section = d_.section.empty() ? b_.sections.front().id : d_.section;
    return {{"version", b_.version},
            {"created", b_.created},
            {"language", b_.language},
            {"geo", geo},
            {"documents", docs},
            {"covariates", b_.covariate_names},
            {"sections", b_.section_ids()},
            {"defaults",
             {{"section", section},
              {"mapping", analysis::to_string(d_.mapping)},
              {"cluster_algorithm", analysis::to_string(d_.cluster_algorithm)},
              {"k", d_.k == 0 ? json(nullptr) : json(d_.k)},
              {"lambda", d_.lambda}}}};
  }

  json sections() const {
    json out = json::array();
    for (const auto& s : b_.sections) {
      json clusterings = json::object();
      for (const auto& [algo, variants] : s.clusters) {
        json list = json::array();
        for (const auto& v : variants) list.push_back(variant_key(v.result));
        clusterings[std::string(analysis::to_string(algo))] = list;
      }
      json mappings = json::array();
      for (const auto& [method, e] : s.mappings) mappings.push_back(analysis::to_string(method));
      out.push_back({{"id", s.id},
                     {"label", s.label},
                     {"method", topics::to_string(s.model.method)},
                     {"num_topics", s.model.num_topics},
                     {"num_documents", s.model.doc_ids.size()},
                     {"coherence", s.model.coherence},
                     {"metric", analysis::to_string(s.distances.metric)},
                     {"clusterings", clusterings},
                     {"mappings", mappings},
                     {"summaries", !s.summaries.empty()}});
    }
    return out;
  }

  json model(const SectionResults& s) const {
    const auto& m = s.model;
    json topics = json::array();
    for (std::size_t k = 0; k < m.num_topics; ++k) {
      json top = json::array();
      for (std::size_t w : topics::top_indices(m.phi.row(k), std::min(kTopTerms, m.vocab.size()))) {
        top.push_back({{"term_id", w}, {"term", m.vocab[w]}, {"phi", m.phi(k, w)}});
      }
      topics.push_back({{"topic", k}, {"label", m.labels[k]}, {"prevalence", s.terms.prevalence[k]}, {"top_terms", top}});
    }
    json docs = json::array();
    for (std::size_t d = 0; d < m.doc_ids.size(); ++d) {
      const auto row = m.theta.row(d);
      docs.push_back({{"doc_id", m.doc_ids[d]},
                      {"theta", std::vector<double>(row.begin(), row.end())},
                      {"length", m.doc_lengths[d]}});
    }
    return {{"section", s.id},
            {"method", topics::to_string(m.method)},
            {"num_topics", m.num_topics},
            {"vocab_size", m.vocab.size()},
            {"coherence", m.coherence},
            {"alpha", m.alpha},
            {"beta", m.beta},
            {"seed", m.seed},
            {"topics", topics},
            {"documents", docs}};
  }

  json terms(const SectionResults& s, const Query& q) const {
    double lambda = d_.lambda;
    if (auto v = param(q, "lambda")) lambda = parse_double(*v, "lambda");
    if (lambda < 0.0 || lambda > 1.0) bad_request("parameter 'lambda' must lie in [0, 1]", "lambda");
    const auto ranking = analysis::relevance(s.model, lambda, s.terms.ranking.top_n);
    json topics = json::array();
    for (std::size_t k = 0; k < s.model.num_topics; ++k) {
      json list = json::array();
      for (const auto& t : ranking.topics[k]) {
        list.push_back({{"term_id", t.term_id}, {"term", t.term}, {"score", t.score}, {"phi", t.phi}, {"lift", t.lift}});
      }
      topics.push_back({{"topic", k},
                        {"label", s.model.labels[k]},
                        {"prevalence", s.terms.prevalence[k]},
                        {"x", s.terms.intertopic(k, 0)},
                        {"y", s.terms.intertopic.cols() > 1 ? s.terms.intertopic(k, 1) : 0.0},
                        {"terms", list}});
    }
    json salient = json::array();
    for (std::size_t i = 0; i < std::min(kTopSalient, s.terms.saliency.size()); ++i) {
      salient.push_back(to_json(s.terms.saliency[i]));
    }
    return {{"section", s.id}, {"lambda", lambda}, {"top_n", ranking.top_n}, {"topics", topics}, {"saliency", salient}};
  }

  const ClusterVariant& variant(const SectionResults& s, const Query& q, analysis::ClusterAlgorithm* algo_out) const {
    using analysis::ClusterAlgorithm;
    ClusterAlgorithm algo = d_.cluster_algorithm;
    if (auto v = param(q, "algo")) {
      try {
        algo = analysis::algorithm_from_string(*v);
      } catch (const Error&) {
        bad_request("parameter 'algo' must be hierarchical, kmeans or hdbscan", "algo");
      }
    }
    *algo_out = algo;
    auto it = s.clusters.find(algo);
    if (it == s.clusters.end() || it->second.empty()) {
      not_found("no " + std::string(analysis::to_string(algo)) + " clustering for section '" + s.id + "'", "algo");
    }
    const auto& variants = it->second;
    if (algo == ClusterAlgorithm::Hdbscan) {
      auto mcs = param(q, "min_cluster_size");
      auto ms = param(q, "min_samples");
      if (!mcs && !ms) return variants.front();
      const auto want_mcs = mcs ? std::optional(parse_size(*mcs, "min_cluster_size")) : std::nullopt;
      const auto want_ms = ms ? std::optional(parse_size(*ms, "min_samples")) : std::nullopt;
      for (const auto& v : variants) {
        if ((!want_mcs || v.result.min_cluster_size == *want_mcs) && (!want_ms || v.result.min_samples == *want_ms)) {
          return v;
        }
      }
      not_found("no hdbscan variant with the requested parameters", mcs ? "min_cluster_size" : "min_samples");
    }
    std::size_t k = algo == d_.cluster_algorithm ? d_.k : 0;
    if (auto v = param(q, "k")) k = parse_size(*v, "k");
    if (k == 0) return variants.front();
    for (const auto& v : variants) {
      if (v.result.requested_k == k) return v;
    }
    not_found("no " + std::string(analysis::to_string(algo)) + " clustering with k=" + std::to_string(k), "k");
  }

  json clusters(const SectionResults& s, const Query& q) const {
    analysis::ClusterAlgorithm algo;
    const auto& v = variant(s, q, &algo);
    const auto& r = v.result;
    json labels = json::array();
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      labels.push_back({{"doc_id", s.model.doc_ids[i]}, {"cluster", r.labels[i]}});
    }
    std::vector<std::size_t> sizes(r.num_clusters(), 0);
    std::size_t noise = 0;
    for (int l : r.labels) {
      if (l < 0) ++noise;
      else ++sizes[static_cast<std::size_t>(l)];
    }
    json out{{"section", s.id},
             {"algorithm", analysis::to_string(algo)},
             {"params", variant_key(r)},
             {"num_clusters", r.num_clusters()},
             {"sizes", sizes},
             {"noise", noise},
             {"labels", labels}};
    switch (algo) {
      case analysis::ClusterAlgorithm::Hierarchical: {
        json merges = json::array();
        for (const auto& m : r.dendrogram) {
          merges.push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}, {"size", m.size}});
        }
        out["dendrogram"] = merges;
        break;
      }
      case analysis::ClusterAlgorithm::KMeans:
        out["inertia"] = r.inertia;
        out["inertia_trace"] = r.inertia_trace;
        break;
      case analysis::ClusterAlgorithm::Hdbscan:
        out["stabilities"] = r.stabilities;
        break;
    }
    return out;
  }

  json manova(const SectionResults& s, const Query& q) const {
    analysis::ClusterAlgorithm algo;
    const auto& v = variant(s, q, &algo);
    return {{"section", s.id},
            {"algorithm", analysis::to_string(algo)},
            {"params", variant_key(v.result)},
            {"report", to_json(v.manova)}};
  }

  json mapping(const SectionResults& s, const Query& q) const {
    analysis::MappingMethod method = d_.mapping;
    if (auto v = param(q, "method")) {
      try {
        method = analysis::mapping_from_string(*v);
      } catch (const Error&) {
        bad_request("parameter 'method' must be tsne or mds", "method");
      }
    }
    auto it = s.mappings.find(method);
    if (it == s.mappings.end()) {
      not_found("no " + std::string(analysis::to_string(method)) + " mapping for section '" + s.id + "'", "method");
    }
    const auto& e = it->second;
    json points = json::array();
    for (std::size_t i = 0; i < e.doc_ids.size(); ++i) {
      points.push_back({{"doc_id", e.doc_ids[i]}, {"x", e.coords(i, 0)}, {"y", e.coords.cols() > 1 ? e.coords(i, 1) : 0.0}});
    }
    return {{"section", s.id},
            {"method", analysis::to_string(method)},
            {"perplexity", optional_json(e.perplexity)},
            {"seed", e.seed},
            {"final_objective", e.trace.empty() ? json(nullptr) : json(e.trace.back())},
            {"points", points}};
  }

  json summary_payload(const SectionResults& s, const summarize::SectionSummary& sum) const {
    std::set<std::size_t> chosen(sum.selected.begin(), sum.selected.end());
    json sentences = json::array();
    for (std::size_t i = 0; i < sum.sentences.size(); ++i) {
      sentences.push_back({{"index", i}, {"text", sum.sentences[i]}, {"selected", chosen.count(i) > 0}});
    }
    json keywords = json::array();
    const std::size_t row = doc_row(s, sum.doc_id);
    if (row < s.model.doc_ids.size()) {
      const auto& m = s.model;
      std::vector<double> weight(m.vocab.size(), 0.0);
      for (std::size_t k = 0; k < m.num_topics; ++k) {
        for (std::size_t w = 0; w < m.vocab.size(); ++w) weight[w] += m.theta(row, k) * m.phi(k, w);
      }
      for (std::size_t w : topics::top_indices(weight, std::min(kKeywords, weight.size()))) {
        keywords.push_back({{"term", m.vocab[w]}, {"weight", weight[w]}});
      }
    }
    return {{"doc_id", sum.doc_id},
            {"section", s.id},
            {"path", summarize::to_string(sum.path)},
            {"summary", sum.summary},
            {"input_words", sum.input_words},
            {"sentences", sentences},
            {"keywords", keywords}};
  }

  json summary(const std::string& doc_id, const Query& q) const {
    const auto* doc = b_.find_document(doc_id);
    if (!doc) not_found("unknown document '" + doc_id + "'", "id");
    auto find = [&](const SectionResults& s) -> const summarize::SectionSummary* {
      for (const auto& sum : s.summaries) {
        if (sum.doc_id == doc_id) return &sum;
      }
      return nullptr;
    };
    if (auto sec = param(q, "section")) {
      const auto& s = section(*sec);
      const auto* sum = find(s);
      if (!sum) not_found("no summary of '" + doc_id + "' in section '" + s.id + "'", "section");
      json out = summary_payload(s, *sum);
      out["entity_id"] = doc->entity_id;
      return out;
    }
    json list = json::array();
    for (const auto& s : b_.sections) {
      if (const auto* sum = find(s)) list.push_back(summary_payload(s, *sum));
    }
    return {{"doc_id", doc_id}, {"entity_id", doc->entity_id}, {"summaries", list}};
  }

  json compare(const Query& q) const {
    const auto& s = section_param(q);
    const auto& m = s.model;
    std::vector<std::size_t> rows;
    for (const auto& id : split(required(q, "ids"), ',')) {
      if (id.empty()) bad_request("parameter 'ids' contains an empty id", "ids");
      const std::size_t r = doc_row(s, id);
      if (r == m.doc_ids.size()) not_found("unknown document '" + id + "' in section '" + s.id + "'", "ids");
      if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
    }
    json docs = json::array();
    for (std::size_t r : rows) {
      const auto row = m.theta.row(r);
      docs.push_back({{"doc_id", m.doc_ids[r]}, {"theta", std::vector<double>(row.begin(), row.end())}});
    }
    json dists = json::array();
    for (std::size_t k = 0; k < m.num_topics; ++k) {
      auto col = m.theta.column(k);
      json values = json::array();
      for (std::size_t d = 0; d < col.size(); ++d) values.push_back({{"doc_id", m.doc_ids[d]}, {"value", col[d]}});
      const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
      std::sort(col.begin(), col.end());
      dists.push_back({{"topic", k},
                       {"label", m.labels[k]},
                       {"min", col.front()},
                       {"q1", quantile(col, 0.25)},
                       {"median", quantile(col, 0.5)},
                       {"q3", quantile(col, 0.75)},
                       {"max", col.back()},
                       {"mean", mean},
                       {"values", values}});
    }
    return {{"section", s.id}, {"topics", topic_refs(m)}, {"documents", docs}, {"distributions", dists}};
  }

  json correlations(const Query& q) const {
    const auto& s = section_param(q);
    const auto& c = s.correlations;
    json topics = json::array();
    for (std::size_t k = 0; k < c.cells.size(); ++k) {
      json cells = json::array();
      for (std::size_t j = 0; j < c.covariates.size(); ++j) {
        const auto& cell = c.cells[k][j];
        cells.push_back({{"covariate", c.covariates[j]},
                         {"pairs", cell.pairs},
                         {"r", optional_json(cell.r)},
                         {"p_value", optional_json(cell.p_value)},
                         {"reason", cell.reason ? json(*cell.reason) : json(nullptr)}});
      }
      topics.push_back({{"topic", k}, {"label", s.model.labels[k]}, {"cells", cells}});
    }
    return {{"section", s.id}, {"method", analysis::to_string(c.method)}, {"covariates", c.covariates}, {"topics", topics}};
  }

  const AnalysisBundle& b_;
  const UiDefaults& d_;
};

}  // namespace

Api::Api(AnalysisBundle bundle, UiDefaults defaults) : bundle_(std::move(bundle)), defaults_(std::move(defaults)) {
  if (bundle_.sections.empty()) throw Error(ErrorCode::InvalidConfig, "bundle has no sections");
  if (!defaults_.section.empty() && !bundle_.find_section(defaults_.section)) {
    throw Error(ErrorCode::InvalidConfig, "ui.section: unknown section '" + defaults_.section + "'");
  }
  if (defaults_.lambda < 0.0 || defaults_.lambda > 1.0) {
    throw Error(ErrorCode::InvalidConfig, "ui.lambda: must lie in [0, 1]");
  }
}

ApiResponse Api::handle(std::string_view path, const Query& query) const {
  std::vector<std::string> parts;
  for (auto& p : split(path, '/')) {
    if (!p.empty()) parts.push_back(std::move(p));
  }
  try {
    if (parts.empty() || parts[0] != "api") not_found("no such endpoint");
    return {200, Router(bundle_, defaults_).route(parts, query).dump()};
  } catch (const HttpError& e) {
    json err{{"status", e.status}, {"message", e.message}};
    err["parameter"] = e.parameter.empty() ? json(nullptr) : json(e.parameter);
    return {e.status, json{{"error", err}}.dump()};
  } catch (const Error& e) {
    json err{{"status", 400}, {"message", e.what()}, {"parameter", nullptr}};
    return {400, json{{"error", err}}.dump()};
  }
}

AppConfig app_config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config: expected object");
  auto invalid = [](const std::string& what) { return Error(ErrorCode::InvalidConfig, what); };
  AppConfig c;
  try {
    if (!j.contains("bundle")) throw invalid("bundle: missing");
    c.bundle = j.at("bundle").get<std::string>();
    if (c.bundle.is_relative()) c.bundle = base_dir / c.bundle;
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.cors_origins = j.value("cors_origins", c.cors_origins);
    if (j.contains("static_dir") && !j["static_dir"].is_null()) {
      fs::path dir = j["static_dir"].get<std::string>();
      c.static_dir = dir.is_relative() ? base_dir / dir : dir;
    }
    if (j.contains("ui")) {
      const json& ui = j["ui"];
      c.ui.section = ui.value("section", c.ui.section);
      if (ui.contains("mapping")) c.ui.mapping = analysis::mapping_from_string(ui["mapping"].get<std::string>());
      if (ui.contains("cluster_algorithm")) {
        c.ui.cluster_algorithm = analysis::algorithm_from_string(ui["cluster_algorithm"].get<std::string>());
      }
      c.ui.k = ui.value("k", c.ui.k);
      c.ui.lambda = ui.value("lambda", c.ui.lambda);
    }
  } catch (const json::exception& e) {
    throw invalid(std::string("config: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw invalid("port: " + std::to_string(c.port) + " is not a valid port");
  if (c.ui.lambda < 0.0 || c.ui.lambda > 1.0) throw invalid("ui.lambda: must lie in [0, 1]");
  return c;
}

AppConfig load_app_config(const fs::path& path) {
  return app_config_from_json(read_json_file(path), path.parent_path());
}

json to_json(const AppConfig& c) {
  return {{"bundle", c.bundle.string()},
          {"host", c.host},
          {"port", c.port},
          {"cors_origins", c.cors_origins},
          {"static_dir", c.static_dir ? json(c.static_dir->string()) : json(nullptr)},
          {"ui",
           {{"section", c.ui.section},
            {"mapping", analysis::to_string(c.ui.mapping)},
            {"cluster_algorithm", analysis::to_string(c.ui.cluster_algorithm)},
            {"k", c.ui.k},
            {"lambda", c.ui.lambda}}}};
}

}  // namespace doclens::service
