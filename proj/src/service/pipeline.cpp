#include "doclens/service/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "doclens/analysis/manova.hpp"
#include "doclens/analysis/terms.hpp"
#include "doclens/corpus/manifest.hpp"
#include "doclens/error.hpp"
#include "doclens/topics/labels.hpp"

namespace doclens::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

void emit(const StageOptions& opts, json event) {
  if (opts.progress) opts.progress(event);
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Folds a labelled chunk so that concatenations cannot collide.
std::uint64_t mix(std::uint64_t h, std::string_view label, std::string_view bytes) {
  h = fnv1a(label, h);
  h = fnv1a(std::to_string(bytes.size()), h);
  return fnv1a(bytes, h);
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class T>
std::vector<T> list_of(const json& j, const char* key, const std::vector<T>& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<std::vector<T>>();
}

AnalysisConfig analysis_config_from_json(const json& j) {
  AnalysisConfig c;
  if (!j.is_object()) invalid("analysis: expected object");
  if (j.contains("metric")) c.metric = analysis::metric_from_string(j["metric"].get<std::string>());
  if (j.contains("hierarchical")) {
    const json& h = j["hierarchical"];
    if (h.contains("linkage")) c.linkage = analysis::linkage_from_string(h["linkage"].get<std::string>());
    c.hierarchical_k = list_of(h, "k", c.hierarchical_k);
  }
  if (j.contains("kmeans")) {
    const json& k = j["kmeans"];
    c.kmeans_k = list_of(k, "k", c.kmeans_k);
    c.kmeans_seed = k.value("seed", c.kmeans_seed);
    c.kmeans_restarts = k.value("restarts", c.kmeans_restarts);
    if (k.contains("space")) c.kmeans_space = analysis::space_from_string(k["space"].get<std::string>());
  }
  if (j.contains("hdbscan")) {
    c.hdbscan.clear();
    for (const auto& v : j["hdbscan"]) {
      c.hdbscan.push_back({v.value("min_cluster_size", std::size_t{3}), v.value("min_samples", std::size_t{2})});
    }
  }
  if (j.contains("tsne")) {
    const json& t = j["tsne"];
    c.tsne = t.value("enabled", true);
    if (t.contains("perplexity") && !t["perplexity"].is_null()) c.tsne_params.perplexity = t["perplexity"].get<double>();
    c.tsne_params.seed = t.value("seed", c.tsne_params.seed);
    c.tsne_params.iterations = t.value("iterations", c.tsne_params.iterations);
  }
  c.mds = j.value("mds", c.mds);
  if (j.contains("relevance")) {
    c.lambda = j["relevance"].value("lambda", c.lambda);
    c.top_n = j["relevance"].value("top_n", c.top_n);
  }
  if (j.contains("correlation")) c.correlation = analysis::correlation_from_string(j["correlation"].get<std::string>());
  if (j.contains("section_labels")) c.section_labels = j["section_labels"].get<std::map<std::string, std::string>>();

  for (std::size_t k : c.hierarchical_k) {
    if (k < 1) invalid("analysis.hierarchical.k: every k must be >= 1");
  }
  for (std::size_t k : c.kmeans_k) {
    if (k < 1) invalid("analysis.kmeans.k: every k must be >= 1");
  }
  if (c.kmeans_restarts < 1) invalid("analysis.kmeans.restarts: must be >= 1");
  for (const auto& h : c.hdbscan) {
    if (h.min_cluster_size < 2) invalid("analysis.hdbscan.min_cluster_size: must be >= 2");
    if (h.min_samples < 1) invalid("analysis.hdbscan.min_samples: must be >= 1");
  }
  if (c.tsne_params.perplexity && !(*c.tsne_params.perplexity > 0.0)) invalid("analysis.tsne.perplexity: must be positive");
  if (c.tsne_params.iterations <= c.tsne_params.exaggeration_iters) {
    invalid("analysis.tsne.iterations: must exceed " + std::to_string(c.tsne_params.exaggeration_iters));
  }
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) invalid("analysis.relevance.lambda: must lie in [0, 1]");
  if (c.top_n < 1) invalid("analysis.relevance.top_n: must be >= 1");
  return c;
}

json analysis_config_json(const AnalysisConfig& c) {
  json hdb = json::array();
  for (const auto& h : c.hdbscan) hdb.push_back({{"min_cluster_size", h.min_cluster_size}, {"min_samples", h.min_samples}});
  return {{"metric", analysis::to_string(c.metric)},
          {"hierarchical", {{"linkage", analysis::to_string(c.linkage)}, {"k", c.hierarchical_k}}},
          {"kmeans",
           {{"k", c.kmeans_k},
            {"seed", c.kmeans_seed},
            {"restarts", c.kmeans_restarts},
            {"space", analysis::to_string(c.kmeans_space)}}},
          {"hdbscan", hdb},
          {"tsne",
           {{"enabled", c.tsne},
            {"perplexity", optional_json(c.tsne_params.perplexity)},
            {"seed", c.tsne_params.seed},
            {"iterations", c.tsne_params.iterations}}},
          {"mds", c.mds},
          {"relevance", {{"lambda", c.lambda}, {"top_n", c.top_n}}},
          {"correlation", analysis::to_string(c.correlation)},
          {"section_labels", c.section_labels}};
}

SummarizeConfig summarize_config_from_json(const json& j) {
  SummarizeConfig c;
  if (!j.is_object()) invalid("summarize: expected object");
  auto& o = c.options;
  o.abstractive.prompt = j.value("prompt", o.abstractive.prompt);
  o.abstractive.word_budget = j.value("word_budget", o.abstractive.word_budget);
  o.extractive_ratio = j.value("extractive_ratio", o.extractive_ratio);
  o.min_sentences = j.value("min_sentences", o.min_sentences);
  o.seed = j.value("seed", o.seed);
  o.parallelism = j.value("parallelism", o.parallelism);
  if (j.contains("llm")) {
    const json& l = j["llm"];
    c.llm.endpoint = l.value("endpoint", c.llm.endpoint);
    c.llm.model = l.value("model", c.llm.model);
    c.llm.api_key_env = l.value("api_key_env", c.llm.api_key_env);
    c.llm.temperature = l.value("temperature", c.llm.temperature);
    c.llm.timeout = std::chrono::seconds(l.value("timeout_s", static_cast<long>(c.llm.timeout.count())));
  }
  if (j.contains("embeddings")) {
    const json& e = j["embeddings"];
    const auto provider = e.value("provider", std::string("builtin"));
    if (provider == "builtin") {
      c.embeddings = EmbeddingSource::Builtin;
    } else if (provider == "http") {
      c.embeddings = EmbeddingSource::Http;
    } else {
      invalid("summarize.embeddings.provider: must be builtin or http");
    }
    auto& h = c.http_embeddings;
    h.endpoint = e.value("endpoint", h.endpoint);
    h.model = e.value("model", h.model);
    h.api_key_env = e.value("api_key_env", h.api_key_env);
    if (e.contains("dimension") && !e["dimension"].is_null()) h.dimension = e["dimension"].get<std::size_t>();
    h.batch_size = e.value("batch_size", h.batch_size);
    h.timeout = std::chrono::seconds(e.value("timeout_s", static_cast<long>(h.timeout.count())));
  }
  if (o.abstractive.prompt.empty()) invalid("summarize.prompt: must not be empty");
  if (o.abstractive.word_budget < 1) invalid("summarize.word_budget: must be >= 1");
  if (!(o.extractive_ratio > 0.0 && o.extractive_ratio <= 1.0)) invalid("summarize.extractive_ratio: must lie in (0, 1]");
  if (o.min_sentences < 1) invalid("summarize.min_sentences: must be >= 1");
  if (o.parallelism < 1) invalid("summarize.parallelism: must be >= 1");
  if (c.http_embeddings.batch_size < 1) invalid("summarize.embeddings.batch_size: must be >= 1");
  return c;
}

json summarize_config_json(const SummarizeConfig& c) {
  const auto& o = c.options;
  const auto& h = c.http_embeddings;
  return {{"prompt", o.abstractive.prompt},
          {"word_budget", o.abstractive.word_budget},
          {"extractive_ratio", o.extractive_ratio},
          {"min_sentences", o.min_sentences},
          {"seed", o.seed},
          {"parallelism", o.parallelism},
          {"llm",
           {{"endpoint", c.llm.endpoint},
            {"model", c.llm.model},
            {"api_key_env", c.llm.api_key_env},
            {"temperature", c.llm.temperature},
            {"timeout_s", c.llm.timeout.count()}}},
          {"embeddings",
           {{"provider", c.embeddings == EmbeddingSource::Builtin ? "builtin" : "http"},
            {"endpoint", h.endpoint},
            {"model", h.model},
            {"api_key_env", h.api_key_env},
            {"dimension", h.dimension ? json(*h.dimension) : json(nullptr)},
            {"batch_size", h.batch_size},
            {"timeout_s", h.timeout.count()}}}};
}

std::string_view to_string(LabelMode m) {
  switch (m) {
    case LabelMode::Default: return "default";
    case LabelMode::Stub: return "stub";
    case LabelMode::Llm: return "llm";
  }
  return "default";
}

StoredCorpus load_corpus(const Workspace& ws) {
  return corpus_from_json(read_json_file(ws.corpus()), ws.corpus().string());
}

analysis::ManovaReport manova_or_note(const Matrix& theta, const std::vector<int>& labels) {
  try {
    return analysis::manova(theta, labels);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooFewGroups && e.code() != ErrorCode::GroupTooSmall) throw;
    analysis::ManovaReport r;
    std::set<int> groups;
    for (int l : labels) {
      if (l < 0) continue;
      groups.insert(l);
      ++r.num_observations;
    }
    r.num_groups = groups.size();
    r.dims = theta.cols() > 0 ? theta.cols() - 1 : 0;
    r.note = e.what();
    return r;
  }
}

analysis::CorrelationMatrix correlations_for(const topics::TopicModel& model, const corpus::ProcessedCorpus& corpus,
                                             analysis::CorrelationMethod method) {
  analysis::CorrelationMatrix out;
  out.method = method;
  out.cells.assign(model.num_topics, {});
  for (const auto& name : corpus.covariate_names) {
    analysis::Covariate cov{name, {}};
    std::size_t present = 0;
    for (const auto& id : model.doc_ids) {
      const auto* doc = corpus.find_document(id);
      std::optional<double> v;
      if (doc) {
        auto it = doc->covariates.find(name);
        if (it != doc->covariates.end()) v = it->second;
      }
      if (v) ++present;
      cov.values.push_back(v);
    }
    out.covariates.push_back(name);
    try {
      const auto m = analysis::correlation_matrix(model.theta, {cov}, method);
      for (std::size_t k = 0; k < model.num_topics; ++k) out.cells[k].push_back(m.cells[k][0]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientPairs) throw;
      for (std::size_t k = 0; k < model.num_topics; ++k) {
        out.cells[k].push_back({present, std::nullopt, std::nullopt, std::string("fewer than 3 paired values")});
      }
    }
  }
  return out;
}

json analysis_to_json(const SectionResults& r) {
  json clusters = json::object();
  for (const auto& [algo, variants] : r.clusters) {
    json list = json::array();
    for (const auto& v : variants) list.push_back(to_json(v));
    clusters[std::string(analysis::to_string(algo))] = list;
  }
  json mappings = json::object();
  for (const auto& [method, e] : r.mappings) mappings[std::string(analysis::to_string(method))] = to_json(e);
  return {{"version", 1},
          {"section", r.id},
          {"label", r.label},
          {"distances", to_json(r.distances)},
          {"clusters", clusters},
          {"mappings", mappings},
          {"terms", to_json(r.terms)},
          {"correlations", to_json(r.correlations)}};
}

void analysis_from_json(const json& j, const std::string& where, SectionResults& r) {
  if (get_as<int>(j, "version", where) != 1) throw Error(ErrorCode::VersionMismatch, where + ".version: expected 1");
  r.label = get_as<std::string>(j, "label", where);
  r.distances = distances_from_json(require(j, "distances", where), where + ".distances");
  for (const auto& [name, list] : require(j, "clusters", where).items()) {
    const auto algo = analysis::algorithm_from_string(name);
    for (const auto& v : list) r.clusters[algo].push_back(variant_from_json(v, where + ".clusters"));
  }
  for (const auto& [name, e] : require(j, "mappings", where).items()) {
    r.mappings[analysis::mapping_from_string(name)] = embedding_from_json(e, where + ".mappings");
  }
  r.terms = terms_from_json(require(j, "terms", where), where + ".terms");
  r.correlations = correlations_from_json(require(j, "correlations", where), where + ".correlations");
}

std::vector<std::string> select_sections(const corpus::ProcessedCorpus& corpus, const std::string& spec) {
  std::vector<std::string> present;
  for (const auto& id : corpus.section_ids) {
    if (!corpus.sections_for(id).empty()) present.push_back(id);
  }
  if (spec == "all") return present;
  std::vector<std::string> out;
  std::stringstream ss(spec);
  std::string id;
  while (std::getline(ss, id, ',')) {
    if (id.empty()) continue;
    if (std::find(corpus.section_ids.begin(), corpus.section_ids.end(), id) == corpus.section_ids.end()) {
      invalid("--sections: unknown section '" + id + "'");
    }
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  if (out.empty()) invalid("--sections: no section selected");
  return out;
}

std::chrono::milliseconds::rep elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j) {
  if (!j.is_object()) invalid("config: expected object");
  static const std::set<std::string> known{"vocabulary", "fit", "labels", "analysis", "summarize"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) invalid("config: unknown field '" + key + "'");
  }
  PipelineConfig c;
  try {
    if (j.contains("vocabulary")) {
      c.min_df = j["vocabulary"].value("min_df", c.min_df);
      c.max_df = j["vocabulary"].value("max_df", c.max_df);
    }
    if (j.contains("fit")) c.fit = topics::fit_config_from_json(j["fit"]);
    if (j.contains("labels")) {
      const auto mode = j["labels"].get<std::string>();
      if (mode == "default") c.labels = LabelMode::Default;
      else if (mode == "stub") c.labels = LabelMode::Stub;
      else if (mode == "llm") c.labels = LabelMode::Llm;
      else invalid("labels: must be default, stub or llm");
    }
    if (j.contains("analysis")) c.analysis = analysis_config_from_json(j["analysis"]);
    if (j.contains("summarize")) c.summarize = summarize_config_from_json(j["summarize"]);
  } catch (const json::exception& e) {
    invalid(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    invalid(e.what());
  }
  if (c.min_df < 1) invalid("vocabulary.min_df: must be >= 1");
  if (!(c.max_df > 0.0 && c.max_df <= 1.0)) invalid("vocabulary.max_df: must lie in (0, 1]");
  return c;
}

json to_json(const PipelineConfig& c) {
  return {{"vocabulary", {{"min_df", c.min_df}, {"max_df", c.max_df}}},
          {"fit", topics::to_json(c.fit)},
          {"labels", to_string(c.labels)},
          {"analysis", analysis_config_json(c.analysis)},
          {"summarize", summarize_config_json(c.summarize)}};
}

std::vector<std::string> Workspace::fitted_sections() const {
  std::vector<std::string> out;
  if (!fs::is_directory(models())) return out;
  const auto stored = corpus_from_json(read_json_file(corpus()), corpus().string());
  for (const auto& id : stored.corpus.section_ids) {
    if (fs::exists(model(id))) out.push_back(id);
  }
  return out;
}

PipelineConfig Workspace::load_config() const {
  if (!fs::exists(config())) return {};
  return pipeline_config_from_json(read_json_file(config()));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool stamp_matches(const Workspace& ws, const std::string& stage, std::uint64_t fingerprint) {
  if (!fs::exists(ws.stamp(stage))) return false;
  try {
    const json j = read_json_file(ws.stamp(stage));
    return j.value("fingerprint", std::string()) == hex(fingerprint);
  } catch (const Error&) {
    return false;
  }
}

void write_stamp(const Workspace& ws, const std::string& stage, std::uint64_t fingerprint) {
  write_json_file(ws.stamp(stage), {{"stage", stage}, {"fingerprint", hex(fingerprint)}});
}

StageOutcome run_ingest(const fs::path& manifest_path, const Workspace& ws, const StageOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto manifest = corpus::load_manifest(manifest_path);
  std::uint64_t fp = mix(fnv1a("ingest"), "manifest", read_bytes(manifest_path));
  for (const auto& d : manifest.documents) fp = mix(fp, d.doc_id, read_bytes(d.text_path));
  if (!opts.force && stamp_matches(ws, "ingest", fp) && fs::exists(ws.corpus())) {
    emit(opts, {{"stage", "ingest"}, {"event", "skipped"}});
    return StageOutcome::Skipped;
  }
  emit(opts, {{"stage", "ingest"}, {"event", "start"}, {"documents", manifest.documents.size()}});
  StoredCorpus stored;
  for (const auto& w : manifest.stopwords_extra) stored.options.stopwords.insert(w);
  stored.corpus = corpus::build_corpus(manifest, stored.options);
  fs::create_directories(ws.root);
  write_json_file(ws.corpus(), to_json(stored));
  write_stamp(ws, "ingest", fp);
  emit(opts, {{"stage", "ingest"},
              {"event", "done"},
              {"documents", stored.corpus.documents.size()},
              {"sections", stored.corpus.sections.size()},
              {"elapsed_ms", elapsed_ms(start)}});
  return StageOutcome::Ran;
}

StageOutcome run_fit(const Workspace& ws, const std::string& sections, const PipelineConfig& config,
                     const StageOptions& opts, const summarize::LlmClient* labeler) {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus_bytes = read_bytes(ws.corpus());
  const auto stored = load_corpus(ws);
  const auto selected = select_sections(stored.corpus, sections);
  const json normalized = to_json(config);
  const std::uint64_t fp =
      mix(mix(mix(fnv1a("fit"), "corpus", corpus_bytes), "sections", sections), "config", normalized.dump());
  bool outputs = fs::exists(ws.config());
  for (const auto& id : selected) outputs = outputs && fs::exists(ws.model(id));
  if (!opts.force && outputs && stamp_matches(ws, "fit", fp)) {
    emit(opts, {{"stage", "fit"}, {"event", "skipped"}});
    return StageOutcome::Skipped;
  }

  std::unique_ptr<summarize::LlmClient> own_labeler;
  if (!labeler && config.labels == LabelMode::Stub) {
    own_labeler = std::make_unique<summarize::StubLlmClient>();
  } else if (!labeler && config.labels == LabelMode::Llm) {
    own_labeler = std::make_unique<summarize::HttpLlmClient>(config.summarize.llm);
  }
  if (own_labeler) labeler = own_labeler.get();

  emit(opts, {{"stage", "fit"}, {"event", "start"}, {"sections", selected}});
  fs::create_directories(ws.models());
  for (const auto& id : selected) {
    const auto section_start = std::chrono::steady_clock::now();
    const auto data = corpus::build_section_data(stored.corpus, id, config.min_df, config.max_df);
    auto result = topics::optimize_model(data.bow, data.vocab.tokens(), config.fit);
    if (config.labels != LabelMode::Default) result.best = topics::label_topics(std::move(result.best), *labeler);
    topics::save_model(result.best, ws.model(id));
    json report = json::array();
    for (const auto& c : result.report) {
      report.push_back({{"k", c.num_topics}, {"seed", c.seed}, {"coherence", c.coherence}});
    }
    emit(opts, {{"stage", "fit"},
                {"event", "section"},
                {"section", id},
                {"documents", data.bow.num_rows()},
                {"vocab", data.vocab.size()},
                {"k", result.best.num_topics},
                {"coherence", result.best.coherence},
                {"candidates", report},
                {"elapsed_ms", elapsed_ms(section_start)}});
  }
  write_json_file(ws.config(), normalized);
  write_stamp(ws, "fit", fp);
  emit(opts, {{"stage", "fit"}, {"event", "done"}, {"elapsed_ms", elapsed_ms(start)}});
  return StageOutcome::Ran;
}

SectionResults analyze_section(const topics::TopicModel& model, const corpus::ProcessedCorpus& corpus,
                               const std::string& section_id, const AnalysisConfig& config,
                               const Progress& progress) {
  auto skip = [&](const std::string& what) {
    if (progress) progress({{"stage", "analyze"}, {"event", "variant_skipped"}, {"section", section_id}, {"reason", what}});
  };
  SectionResults r;
  r.id = section_id;
  auto label = config.section_labels.find(section_id);
  r.label = label != config.section_labels.end() ? label->second : humanize(section_id);
  r.model = model;
  const std::size_t n = model.doc_ids.size();
  r.distances = analysis::distance_matrix(model.theta, config.metric, model.doc_ids);

  using analysis::ClusterAlgorithm;
  for (std::size_t k : config.hierarchical_k) {
    if (k > n) {
      skip("hierarchical k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " documents");
      continue;
    }
    auto c = analysis::agglomerative(r.distances, config.linkage, k);
    auto m = manova_or_note(model.theta, c.labels);
    r.clusters[ClusterAlgorithm::Hierarchical].push_back({std::move(c), std::move(m)});
  }
  for (std::size_t k : config.kmeans_k) {
    if (k > n) {
      skip("kmeans k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " documents");
      continue;
    }
    auto c = analysis::kmeans(model.theta, k, config.kmeans_seed, config.kmeans_restarts, config.kmeans_space);
    auto m = manova_or_note(model.theta, c.labels);
    r.clusters[ClusterAlgorithm::KMeans].push_back({std::move(c), std::move(m)});
  }
  for (const auto& h : config.hdbscan) {
    if (h.min_cluster_size > n) {
      skip("hdbscan min_cluster_size=" + std::to_string(h.min_cluster_size) + " exceeds " + std::to_string(n) +
           " documents");
      continue;
    }
    auto c = analysis::hdbscan(r.distances, h.min_cluster_size, h.min_samples);
    auto m = manova_or_note(model.theta, c.labels);
    r.clusters[ClusterAlgorithm::Hdbscan].push_back({std::move(c), std::move(m)});
  }

  if (config.tsne) r.mappings[analysis::MappingMethod::TSNE] = analysis::tsne(r.distances, config.tsne_params);
  if (config.mds) r.mappings[analysis::MappingMethod::MDS] = analysis::classical_mds(r.distances, 2);

  r.terms.ranking = analysis::relevance(model, config.lambda, config.top_n);
  r.terms.saliency = analysis::saliency(model);
  r.terms.prevalence = analysis::topic_prevalence(model);
  const auto topic_dist = analysis::distance_matrix(model.phi, analysis::Metric::JSD);
  r.terms.intertopic = analysis::classical_mds(topic_dist, 2).coords;

  r.correlations = correlations_for(model, corpus, config.correlation);
  return r;
}

StageOutcome run_analyze(const Workspace& ws, const StageOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus_bytes = read_bytes(ws.corpus());
  const auto config = ws.load_config();
  const auto sections = ws.fitted_sections();
  if (sections.empty()) throw Error(ErrorCode::MissingFile, "no fitted models in " + ws.models().string());
  std::uint64_t fp = mix(mix(fnv1a("analyze"), "corpus", corpus_bytes), "config", analysis_config_json(config.analysis).dump());
  bool outputs = true;
  for (const auto& id : sections) {
    fp = mix(fp, id, read_bytes(ws.model(id)));
    outputs = outputs && fs::exists(ws.analysis(id));
  }
  if (!opts.force && outputs && stamp_matches(ws, "analyze", fp)) {
    emit(opts, {{"stage", "analyze"}, {"event", "skipped"}});
    return StageOutcome::Skipped;
  }
  emit(opts, {{"stage", "analyze"}, {"event", "start"}, {"sections", sections}});
  const auto stored = load_corpus(ws);
  for (const auto& id : sections) {
    const auto section_start = std::chrono::steady_clock::now();
    const auto model = topics::load_model(ws.model(id));
    const auto r = analyze_section(model, stored.corpus, id, config.analysis, opts.progress);
    write_json_file(ws.analysis(id), analysis_to_json(r));
    json variants = json::object();
    for (const auto& [algo, list] : r.clusters) variants[std::string(analysis::to_string(algo))] = list.size();
    emit(opts, {{"stage", "analyze"},
                {"event", "section"},
                {"section", id},
                {"clusterings", variants},
                {"mappings", r.mappings.size()},
                {"elapsed_ms", elapsed_ms(section_start)}});
  }
  write_stamp(ws, "analyze", fp);
  emit(opts, {{"stage", "analyze"}, {"event", "done"}, {"elapsed_ms", elapsed_ms(start)}});
  return StageOutcome::Ran;
}

StageOutcome run_summarize(const Workspace& ws, const summarize::LlmClient& client, const std::string& client_tag,
                           const StageOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus_bytes = read_bytes(ws.corpus());
  const auto config = ws.load_config();
  const std::uint64_t fp = mix(mix(mix(fnv1a("summarize"), "corpus", corpus_bytes), "config",
                                   summarize_config_json(config.summarize).dump()),
                               "client", client_tag);
  if (!opts.force && fs::exists(ws.summaries()) && stamp_matches(ws, "summarize", fp)) {
    emit(opts, {{"stage", "summarize"}, {"event", "skipped"}});
    return StageOutcome::Skipped;
  }
  const auto stored = load_corpus(ws);
  emit(opts, {{"stage", "summarize"}, {"event", "start"}, {"sections", stored.corpus.sections.size()}});

  std::unique_ptr<summarize::EmbeddingProvider> provider;
  if (config.summarize.embeddings == EmbeddingSource::Builtin) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& s : stored.corpus.sections) docs.push_back(s.tokens);
    provider = std::make_unique<summarize::BuiltinLexicalProvider>(docs, stored.options);
  } else {
    provider = std::make_unique<summarize::HttpEmbeddingProvider>(config.summarize.http_embeddings);
  }
  const auto summaries = summarize::summarize_corpus(stored.corpus, client, *provider, config.summarize.options);
  json list = json::array();
  std::size_t extractive = 0;
  for (const auto& s : summaries) {
    list.push_back(to_json(s));
    if (s.path == summarize::SummaryPath::Extractive) ++extractive;
  }
  write_json_file(ws.summaries(), {{"version", 1}, {"summaries", list}});
  write_stamp(ws, "summarize", fp);
  emit(opts, {{"stage", "summarize"},
              {"event", "done"},
              {"summaries", summaries.size()},
              {"extractive", extractive},
              {"elapsed_ms", elapsed_ms(start)}});
  return StageOutcome::Ran;
}

AnalysisBundle assemble_bundle(const Workspace& ws, const std::string& created) {
  const auto stored = load_corpus(ws);
  const auto config = ws.load_config();
  const auto sections = ws.fitted_sections();
  if (sections.empty()) throw Error(ErrorCode::MissingFile, "no fitted models in " + ws.models().string());

  std::vector<summarize::SectionSummary> summaries;
  if (fs::exists(ws.summaries())) {
    const json j = read_json_file(ws.summaries());
    const std::string where = ws.summaries().string();
    for (const auto& s : require(j, "summaries", where)) summaries.push_back(summary_from_json(s, where));
  }

  AnalysisBundle b;
  b.created = created;
  b.language = stored.corpus.language;
  b.documents = stored.corpus.documents;
  b.covariate_names = stored.corpus.covariate_names;
  b.config = to_json(config);
  for (const auto& id : sections) {
    SectionResults r;
    r.id = id;
    r.model = topics::load_model(ws.model(id));
    const auto path = ws.analysis(id);
    if (!fs::exists(path)) throw Error(ErrorCode::MissingFile, path.string() + " (run analyze)");
    analysis_from_json(read_json_file(path), path.string(), r);
    for (const auto& s : summaries) {
      if (s.section_id == id) r.summaries.push_back(s);
    }
    b.sections.push_back(std::move(r));
  }
  return b;
}

StageOutcome run_export(const Workspace& ws, const fs::path& out, const std::optional<std::string>& timestamp,
                        const StageOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  std::string created;
  if (timestamp) {
    created = *timestamp;
  } else if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long secs = std::strtoll(epoch, &end, 10);
    if (*end != '\0') invalid("SOURCE_DATE_EPOCH: not an integer");
    created = iso8601_utc(secs);
  } else {
    created = iso8601_utc(std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count());
  }

  std::uint64_t fp = mix(mix(fnv1a("export"), "created", created), "out", fs::absolute(out).lexically_normal().string());
  fp = mix(fp, "corpus", read_bytes(ws.corpus()));
  if (fs::exists(ws.config())) fp = mix(fp, "config", read_bytes(ws.config()));
  for (const auto& id : ws.fitted_sections()) {
    fp = mix(fp, id, read_bytes(ws.model(id)));
    if (fs::exists(ws.analysis(id))) fp = mix(fp, id, read_bytes(ws.analysis(id)));
  }
  if (fs::exists(ws.summaries())) fp = mix(fp, "summaries", read_bytes(ws.summaries()));
  if (!opts.force && fs::exists(out / "manifest.json") && stamp_matches(ws, "export", fp)) {
    emit(opts, {{"stage", "export"}, {"event", "skipped"}});
    return StageOutcome::Skipped;
  }
  emit(opts, {{"stage", "export"}, {"event", "start"}, {"out", out.string()}});
  const auto bundle = assemble_bundle(ws, created);
  if (!fs::exists(ws.summaries())) {
    emit(opts, {{"stage", "export"}, {"event", "warning"}, {"message", "no summaries; run summarize first"}});
  }
  save_bundle(bundle, out);
  write_stamp(ws, "export", fp);
  emit(opts, {{"stage", "export"},
              {"event", "done"},
              {"sections", bundle.sections.size()},
              {"elapsed_ms", elapsed_ms(start)}});
  return StageOutcome::Ran;
}

std::string iso8601_utc(std::int64_t seconds) {
  const std::time_t t = static_cast<std::time_t>(seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string humanize(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (c == '_' || c == '-') c = ' ';
  }
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

}  // namespace doclens::service
