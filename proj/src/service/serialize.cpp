#include "doclens/service/serialize.hpp"

#include <fstream>
#include <sstream>

namespace doclens::service {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, where + ": " + what);
}

template <class F>
auto parse_enum(const json& obj, const char* key, const std::string& where, F from_string) {
  const auto name = get_as<std::string>(obj, key, where);
  try {
    return from_string(name);
  } catch (const Error&) {
    schema(where + "." + key, "unknown value '" + name + "'");
  }
}

const json& require_array(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array()) schema(where + "." + key, "expected array");
  return v;
}

std::optional<std::string> optional_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) schema(where + "." + key, "expected string or null");
  return it->get<std::string>();
}

json optional_string_json(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

}  // namespace

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(where, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(where + "." + key, "missing");
  return *it;
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) schema(where + "." + key, "expected number or null");
  return it->get<double>();
}

json to_json(const Matrix& m) {
  return m.to_rows();
}

Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected array of rows");
  std::vector<std::vector<double>> rows;
  try {
    rows = j.get<std::vector<std::vector<double>>>();
  } catch (const json::exception&) {
    schema(where, "expected array of numeric rows");
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const Error& e) {
    schema(where, e.what());
  }
}

json to_json(const analysis::DistanceMatrix& d) {
  return {{"metric", analysis::to_string(d.metric)}, {"doc_ids", d.doc_ids}, {"values", to_json(d.values)}};
}

analysis::DistanceMatrix distances_from_json(const json& j, const std::string& where) {
  const auto metric = parse_enum(j, "metric", where, analysis::metric_from_string);
  auto ids = get_as<std::vector<std::string>>(j, "doc_ids", where);
  auto values = matrix_from_json(require(j, "values", where), where + ".values");
  if (values.rows() != ids.size()) schema(where, "doc_ids and values disagree in size");
  try {
    return analysis::distance_matrix_from(std::move(values), metric, std::move(ids));
  } catch (const Error& e) {
    schema(where, e.what());
  }
}

json to_json(const analysis::ClusterResult& c) {
  using analysis::ClusterAlgorithm;
  json j{{"algorithm", analysis::to_string(c.algorithm)}, {"labels", c.labels}, {"requested_k", c.requested_k}};
  switch (c.algorithm) {
    case ClusterAlgorithm::Hierarchical: {
      j["linkage"] = analysis::to_string(c.linkage);
      json merges = json::array();
      for (const auto& m : c.dendrogram) merges.push_back({m.a, m.b, m.height, m.size});
      j["dendrogram"] = merges;
      break;
    }
    case ClusterAlgorithm::KMeans:
      j["space"] = analysis::to_string(c.space);
      j["seed"] = c.seed;
      j["restarts"] = c.restarts;
      j["inertia"] = c.inertia;
      j["inertia_trace"] = c.inertia_trace;
      j["centroids"] = to_json(c.centroids);
      break;
    case ClusterAlgorithm::Hdbscan: {
      j["min_cluster_size"] = c.min_cluster_size;
      j["min_samples"] = c.min_samples;
      json edges = json::array();
      for (const auto& e : c.condensed_tree) edges.push_back({e.parent, e.child, e.lambda, e.child_size});
      j["condensed_tree"] = edges;
      j["stabilities"] = c.stabilities;
      break;
    }
  }
  return j;
}

analysis::ClusterResult cluster_from_json(const json& j, const std::string& where) {
  using analysis::ClusterAlgorithm;
  analysis::ClusterResult c;
  c.algorithm = parse_enum(j, "algorithm", where, analysis::algorithm_from_string);
  c.labels = get_as<std::vector<int>>(j, "labels", where);
  c.requested_k = get_as<std::size_t>(j, "requested_k", where);
  for (int l : c.labels) {
    if (l < -1) schema(where + ".labels", "label below -1");
  }
  switch (c.algorithm) {
    case ClusterAlgorithm::Hierarchical:
      c.linkage = parse_enum(j, "linkage", where, analysis::linkage_from_string);
      for (const auto& m : require_array(j, "dendrogram", where)) {
        if (!m.is_array() || m.size() != 4) schema(where + ".dendrogram", "expected [a, b, height, size]");
        try {
          c.dendrogram.push_back({m[0].get<std::size_t>(), m[1].get<std::size_t>(), m[2].get<double>(),
                                  m[3].get<std::size_t>()});
        } catch (const json::exception&) {
          schema(where + ".dendrogram", "wrong type");
        }
      }
      break;
    case ClusterAlgorithm::KMeans:
      c.space = parse_enum(j, "space", where, analysis::space_from_string);
      c.seed = get_as<std::uint64_t>(j, "seed", where);
      c.restarts = get_as<std::size_t>(j, "restarts", where);
      c.inertia = get_as<double>(j, "inertia", where);
      c.inertia_trace = get_as<std::vector<double>>(j, "inertia_trace", where);
      c.centroids = matrix_from_json(require(j, "centroids", where), where + ".centroids");
      break;
    case ClusterAlgorithm::Hdbscan:
      c.min_cluster_size = get_as<std::size_t>(j, "min_cluster_size", where);
      c.min_samples = get_as<std::size_t>(j, "min_samples", where);
      for (const auto& e : require_array(j, "condensed_tree", where)) {
        if (!e.is_array() || e.size() != 4) schema(where + ".condensed_tree", "expected [parent, child, lambda, size]");
        try {
          c.condensed_tree.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>(),
                                      e[3].get<std::size_t>()});
        } catch (const json::exception&) {
          schema(where + ".condensed_tree", "wrong type");
        }
      }
      c.stabilities = get_as<std::vector<double>>(j, "stabilities", where);
      break;
  }
  return c;
}

json to_json(const analysis::ManovaReport& r) {
  return {{"num_groups", r.num_groups},
          {"num_observations", r.num_observations},
          {"dims", r.dims},
          {"wilks_lambda", optional_json(r.wilks_lambda)},
          {"pillai_trace", optional_json(r.pillai_trace)},
          {"f_stat", optional_json(r.f_stat)},
          {"df1", optional_json(r.df1)},
          {"df2", optional_json(r.df2)},
          {"p_value", optional_json(r.p_value)},
          {"fallback_used", analysis::to_string(r.fallback_used)},
          {"note", optional_string_json(r.note)}};
}

analysis::ManovaReport manova_from_json(const json& j, const std::string& where) {
  analysis::ManovaReport r;
  r.num_groups = get_as<std::size_t>(j, "num_groups", where);
  r.num_observations = get_as<std::size_t>(j, "num_observations", where);
  r.dims = get_as<std::size_t>(j, "dims", where);
  r.wilks_lambda = optional_number(j, "wilks_lambda", where);
  r.pillai_trace = optional_number(j, "pillai_trace", where);
  r.f_stat = optional_number(j, "f_stat", where);
  r.df1 = optional_number(j, "df1", where);
  r.df2 = optional_number(j, "df2", where);
  r.p_value = optional_number(j, "p_value", where);
  const auto fallback = get_as<std::string>(j, "fallback_used", where);
  if (fallback == analysis::to_string(analysis::ManovaFallback::Pillai)) {
    r.fallback_used = analysis::ManovaFallback::Pillai;
  } else if (fallback != analysis::to_string(analysis::ManovaFallback::None)) {
    schema(where + ".fallback_used", "unknown value '" + fallback + "'");
  }
  r.note = optional_string(j, "note", where);
  return r;
}

json to_json(const analysis::Embedding2D& e) {
  return {{"method", analysis::to_string(e.method)},
          {"doc_ids", e.doc_ids},
          {"coords", to_json(e.coords)},
          {"trace", e.trace},
          {"perplexity", optional_json(e.perplexity)},
          {"seed", e.seed}};
}

analysis::Embedding2D embedding_from_json(const json& j, const std::string& where) {
  analysis::Embedding2D e;
  e.method = parse_enum(j, "method", where, analysis::mapping_from_string);
  e.doc_ids = get_as<std::vector<std::string>>(j, "doc_ids", where);
  e.coords = matrix_from_json(require(j, "coords", where), where + ".coords");
  if (e.coords.rows() != e.doc_ids.size()) schema(where, "doc_ids and coords disagree in size");
  e.trace = get_as<std::vector<double>>(j, "trace", where);
  e.perplexity = optional_number(j, "perplexity", where);
  e.seed = get_as<std::uint64_t>(j, "seed", where);
  return e;
}

json to_json(const analysis::TermRanking& r) {
  json topics = json::array();
  for (const auto& terms : r.topics) {
    json list = json::array();
    for (const auto& t : terms) {
      list.push_back({{"term_id", t.term_id}, {"term", t.term}, {"score", t.score}, {"phi", t.phi}, {"lift", t.lift}});
    }
    topics.push_back(list);
  }
  return {{"lambda", r.lambda}, {"top_n", r.top_n}, {"topics", topics}};
}

analysis::TermRanking ranking_from_json(const json& j, const std::string& where) {
  analysis::TermRanking r;
  r.lambda = get_as<double>(j, "lambda", where);
  r.top_n = get_as<std::size_t>(j, "top_n", where);
  for (const auto& list : require_array(j, "topics", where)) {
    if (!list.is_array()) schema(where + ".topics", "expected array per topic");
    std::vector<analysis::TermScore> terms;
    for (const auto& t : list) {
      const std::string w = where + ".topics[" + std::to_string(r.topics.size()) + "]";
      terms.push_back({get_as<std::size_t>(t, "term_id", w), get_as<std::string>(t, "term", w),
                       get_as<double>(t, "score", w), get_as<double>(t, "phi", w), get_as<double>(t, "lift", w)});
    }
    r.topics.push_back(std::move(terms));
  }
  return r;
}

json to_json(const analysis::TermSaliency& s) {
  return {{"term_id", s.term_id},
          {"term", s.term},
          {"saliency", s.saliency},
          {"distinctiveness", s.distinctiveness},
          {"frequency", s.frequency}};
}

analysis::TermSaliency saliency_from_json(const json& j, const std::string& where) {
  return {get_as<std::size_t>(j, "term_id", where), get_as<std::string>(j, "term", where),
          get_as<double>(j, "saliency", where), get_as<double>(j, "distinctiveness", where),
          get_as<double>(j, "frequency", where)};
}

json to_json(const analysis::CorrelationMatrix& m) {
  json rows = json::array();
  for (const auto& row : m.cells) {
    json cells = json::array();
    for (const auto& c : row) {
      cells.push_back({{"pairs", c.pairs},
                       {"r", optional_json(c.r)},
                       {"p_value", optional_json(c.p_value)},
                       {"reason", optional_string_json(c.reason)}});
    }
    rows.push_back(cells);
  }
  return {{"method", analysis::to_string(m.method)}, {"covariates", m.covariates}, {"cells", rows}};
}

analysis::CorrelationMatrix correlations_from_json(const json& j, const std::string& where) {
  analysis::CorrelationMatrix m;
  m.method = parse_enum(j, "method", where, analysis::correlation_from_string);
  m.covariates = get_as<std::vector<std::string>>(j, "covariates", where);
  for (const auto& row : require_array(j, "cells", where)) {
    if (!row.is_array() || row.size() != m.covariates.size()) {
      schema(where + ".cells", "expected one cell per covariate");
    }
    std::vector<analysis::CorrelationCell> cells;
    for (const auto& c : row) {
      const std::string w = where + ".cells";
      cells.push_back({get_as<std::size_t>(c, "pairs", w), optional_number(c, "r", w), optional_number(c, "p_value", w),
                       optional_string(c, "reason", w)});
    }
    m.cells.push_back(std::move(cells));
  }
  return m;
}

json to_json(const summarize::SectionSummary& s) {
  return {{"doc_id", s.doc_id},
          {"section_id", s.section_id},
          {"path", summarize::to_string(s.path)},
          {"summary", s.summary},
          {"sentences", s.sentences},
          {"selected", s.selected},
          {"input_words", s.input_words},
          {"retries", s.retries}};
}

summarize::SectionSummary summary_from_json(const json& j, const std::string& where) {
  summarize::SectionSummary s;
  s.doc_id = get_as<std::string>(j, "doc_id", where);
  s.section_id = get_as<std::string>(j, "section_id", where);
  s.path = parse_enum(j, "path", where, summarize::summary_path_from_string);
  s.summary = get_as<std::string>(j, "summary", where);
  s.sentences = get_as<std::vector<std::string>>(j, "sentences", where);
  s.selected = get_as<std::vector<std::size_t>>(j, "selected", where);
  s.input_words = get_as<std::size_t>(j, "input_words", where);
  s.retries = get_as<int>(j, "retries", where);
  for (std::size_t i : s.selected) {
    if (i >= s.sentences.size()) schema(where + ".selected", "index " + std::to_string(i) + " out of range");
  }
  return s;
}

json to_json(const corpus::DocumentInfo& d) {
  json cov = json::object();
  for (const auto& [name, value] : d.covariates) cov[name] = optional_json(value);
  return {{"doc_id", d.doc_id}, {"entity_id", d.entity_id}, {"covariates", cov}};
}

corpus::DocumentInfo document_from_json(const json& j, const std::string& where) {
  corpus::DocumentInfo d;
  d.doc_id = get_as<std::string>(j, "doc_id", where);
  d.entity_id = get_as<std::string>(j, "entity_id", where);
  const json& cov = require(j, "covariates", where);
  if (!cov.is_object()) schema(where + ".covariates", "expected object");
  for (const auto& [name, value] : cov.items()) {
    d.covariates[name] = optional_number(cov, name.c_str(), where + ".covariates");
  }
  return d;
}

json to_json(const corpus::PreprocessOptions& o) {
  json lemmas = json::object();
  for (const auto& [from, to] : o.lemmas) lemmas[from] = to;
  return {{"stopwords", o.stopwords}, {"min_token_len", o.min_token_len}, {"stemming", o.stemming}, {"lemmas", lemmas}};
}

corpus::PreprocessOptions preprocess_from_json(const json& j, const std::string& where) {
  corpus::PreprocessOptions o;
  o.stopwords = get_as<std::set<std::string>>(j, "stopwords", where);
  o.min_token_len = get_as<std::size_t>(j, "min_token_len", where);
  o.stemming = get_as<bool>(j, "stemming", where);
  o.lemmas = get_as<std::map<std::string, std::string>>(j, "lemmas", where);
  return o;
}

json to_json(const StoredCorpus& c) {
  json docs = json::array();
  for (const auto& d : c.corpus.documents) docs.push_back(to_json(d));
  json sections = json::array();
  for (const auto& s : c.corpus.sections) {
    sections.push_back(
        {{"doc_id", s.doc_id}, {"section_id", s.section_id}, {"raw_text", s.raw_text}, {"tokens", s.tokens}});
  }
  return {{"version", 1},
          {"language", c.corpus.language},
          {"section_ids", c.corpus.section_ids},
          {"covariate_names", c.corpus.covariate_names},
          {"documents", docs},
          {"sections", sections},
          {"preprocess", to_json(c.options)}};
}

StoredCorpus corpus_from_json(const json& j, const std::string& where) {
  if (get_as<int>(j, "version", where) != 1) {
    throw Error(ErrorCode::VersionMismatch, where + ".version: expected 1");
  }
  StoredCorpus c;
  c.corpus.language = get_as<std::string>(j, "language", where);
  c.corpus.section_ids = get_as<std::vector<std::string>>(j, "section_ids", where);
  c.corpus.covariate_names = get_as<std::vector<std::string>>(j, "covariate_names", where);
  for (const auto& d : require_array(j, "documents", where)) {
    c.corpus.documents.push_back(document_from_json(d, where + ".documents"));
  }
  for (const auto& s : require_array(j, "sections", where)) {
    const std::string w = where + ".sections";
    corpus::Section sec;
    sec.doc_id = get_as<std::string>(s, "doc_id", w);
    sec.section_id = get_as<std::string>(s, "section_id", w);
    sec.raw_text = get_as<std::string>(s, "raw_text", w);
    sec.tokens = get_as<std::vector<std::string>>(s, "tokens", w);
    if (!c.corpus.find_document(sec.doc_id)) schema(w, "unknown doc_id '" + sec.doc_id + "'");
    c.corpus.sections.push_back(std::move(sec));
  }
  c.options = preprocess_from_json(require(j, "preprocess", where), where + ".preprocess");
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace doclens::service
