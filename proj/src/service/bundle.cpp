#include "doclens/service/bundle.hpp"

#include <algorithm>
#include <set>

#include "doclens/error.hpp"
#include "doclens/service/serialize.hpp"

namespace doclens::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void dangling(const std::string& what) {
  throw Error(ErrorCode::DanglingReference, what);
}

void check_same_ids(const std::vector<std::string>& got, const std::vector<std::string>& want, const std::string& where) {
  if (got.size() != want.size()) {
    dangling(where + ": " + std::to_string(got.size()) + " doc_ids, model has " + std::to_string(want.size()));
  }
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i] != want[i]) dangling(where + ": doc_id '" + got[i] + "' at row " + std::to_string(i) + " is not the model's");
  }
}

void validate_section(const AnalysisBundle& b, const SectionResults& s) {
  const std::string base = "sections/" + s.id;
  try {
    topics::check_invariants(s.model);
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, base + "/model.json: " + e.what());
  }
  const auto& ids = s.model.doc_ids;
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!b.find_document(id)) dangling(base + "/model.json: unknown doc_id '" + id + "'");
    if (!seen.insert(id).second) dangling(base + "/model.json: doc_id '" + id + "' repeats");
  }
  const std::size_t n = ids.size();
  const std::size_t K = s.model.num_topics;

  check_same_ids(s.distances.doc_ids, ids, base + "/distances.json");

  for (const auto& [algo, variants] : s.clusters) {
    const std::string where = base + "/clusters/" + std::string(analysis::to_string(algo)) + ".json";
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const auto& r = variants[v].result;
      if (r.algorithm != algo) throw Error(ErrorCode::SchemaViolation, where + ": variant " + std::to_string(v) + " has another algorithm");
      if (r.labels.size() != n) dangling(where + ": variant " + std::to_string(v) + " labels do not cover the documents");
    }
  }
  for (const auto& [method, e] : s.mappings) {
    check_same_ids(e.doc_ids, ids, base + "/mapping/" + std::string(analysis::to_string(method)) + ".json");
  }

  const std::string terms = base + "/terms.json";
  if (s.terms.ranking.topics.size() != K) dangling(terms + ": ranking has " + std::to_string(s.terms.ranking.topics.size()) + " topics, model has " + std::to_string(K));
  for (const auto& list : s.terms.ranking.topics) {
    for (const auto& t : list) {
      if (t.term_id >= s.model.vocab.size() || s.model.vocab[t.term_id] != t.term) {
        dangling(terms + ": term '" + t.term + "' (id " + std::to_string(t.term_id) + ") is not in the vocabulary");
      }
    }
  }
  for (const auto& t : s.terms.saliency) {
    if (t.term_id >= s.model.vocab.size() || s.model.vocab[t.term_id] != t.term) {
      dangling(terms + ": saliency term '" + t.term + "' is not in the vocabulary");
    }
  }
  if (s.terms.prevalence.size() != K) dangling(terms + ": prevalence does not have one entry per topic");
  if (s.terms.intertopic.rows() != K) dangling(terms + ": intertopic map does not have one row per topic");

  const std::string corr = base + "/correlations.json";
  for (const auto& name : s.correlations.covariates) {
    if (std::find(b.covariate_names.begin(), b.covariate_names.end(), name) == b.covariate_names.end()) {
      dangling(corr + ": unknown covariate '" + name + "'");
    }
  }
  if (s.correlations.cells.size() != K) dangling(corr + ": expected one row per topic");

  std::set<std::string> summarized;
  for (const auto& sum : s.summaries) {
    const std::string where = base + "/summaries.json";
    if (sum.section_id != s.id) dangling(where + ": summary of section '" + sum.section_id + "'");
    if (!b.find_document(sum.doc_id)) dangling(where + ": unknown doc_id '" + sum.doc_id + "'");
    if (!summarized.insert(sum.doc_id).second) dangling(where + ": doc_id '" + sum.doc_id + "' summarized twice");
  }
}

template <class T, class F>
T load_part(const fs::path& root, const std::string& rel, F parse) {
  const json j = read_json_file(root / rel);
  try {
    return parse(j, rel);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaViolation) throw Error(ErrorCode::SchemaViolation, rel + ": " + e.what());
    throw;
  }
}

}  // namespace

json to_json(const ClusterVariant& v) {
  return {{"result", to_json(v.result)}, {"manova", to_json(v.manova)}};
}

ClusterVariant variant_from_json(const json& j, const std::string& where) {
  return {cluster_from_json(require(j, "result", where), where + ".result"),
          manova_from_json(require(j, "manova", where), where + ".manova")};
}

json to_json(const TopicTerms& t) {
  json saliency = json::array();
  for (const auto& s : t.saliency) saliency.push_back(to_json(s));
  return {{"ranking", to_json(t.ranking)},
          {"saliency", saliency},
          {"prevalence", t.prevalence},
          {"intertopic", to_json(t.intertopic)}};
}

TopicTerms terms_from_json(const json& j, const std::string& where) {
  TopicTerms t;
  t.ranking = ranking_from_json(require(j, "ranking", where), where + ".ranking");
  const json& sal = require(j, "saliency", where);
  if (!sal.is_array()) throw Error(ErrorCode::SchemaViolation, where + ".saliency: expected array");
  for (const auto& x : sal) t.saliency.push_back(saliency_from_json(x, where + ".saliency"));
  t.prevalence = get_as<std::vector<double>>(j, "prevalence", where);
  t.intertopic = matrix_from_json(require(j, "intertopic", where), where + ".intertopic");
  return t;
}

const corpus::DocumentInfo* AnalysisBundle::find_document(const std::string& doc_id) const {
  for (const auto& d : documents) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

const SectionResults* AnalysisBundle::find_section(const std::string& section_id) const {
  for (const auto& s : sections) {
    if (s.id == section_id) return &s;
  }
  return nullptr;
}

std::vector<std::string> AnalysisBundle::section_ids() const {
  std::vector<std::string> out;
  for (const auto& s : sections) out.push_back(s.id);
  return out;
}

bool valid_section_id(const std::string& id) {
  if (id.empty() || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

void validate(const AnalysisBundle& b) {
  if (b.version != kBundleVersion) {
    throw Error(ErrorCode::VersionMismatch, "manifest.json: version " + std::to_string(b.version));
  }
  if (b.sections.empty()) throw Error(ErrorCode::SchemaViolation, "manifest.json: no sections");
  std::set<std::string> docs;
  for (const auto& d : b.documents) {
    if (!docs.insert(d.doc_id).second) throw Error(ErrorCode::DuplicateDocId, "manifest.json: " + d.doc_id);
    for (const auto& [name, value] : d.covariates) {
      if (std::find(b.covariate_names.begin(), b.covariate_names.end(), name) == b.covariate_names.end()) {
        dangling("manifest.json: document '" + d.doc_id + "' has unknown covariate '" + name + "'");
      }
    }
  }
  std::set<std::string> sections;
  for (const auto& s : b.sections) {
    if (!valid_section_id(s.id)) throw Error(ErrorCode::SchemaViolation, "manifest.json: bad section id '" + s.id + "'");
    if (!sections.insert(s.id).second) throw Error(ErrorCode::SchemaViolation, "manifest.json: section '" + s.id + "' repeats");
    validate_section(b, s);
  }
}

void save_bundle(const AnalysisBundle& b, const fs::path& path) {
  validate(b);
  if (fs::exists(path)) {
    if (!fs::is_directory(path)) throw Error(ErrorCode::IoError, path.string() + " is not a directory");
    const bool is_bundle = fs::exists(path / "manifest.json");
    if (!is_bundle && !fs::is_empty(path)) {
      throw Error(ErrorCode::IoError, path.string() + " is neither empty nor a bundle");
    }
    std::error_code ec;
    fs::remove_all(path / "sections", ec);
    fs::remove(path / "manifest.json", ec);
  }

  json docs = json::array();
  for (const auto& d : b.documents) docs.push_back(to_json(d));
  json sections = json::array();
  for (const auto& s : b.sections) sections.push_back({{"id", s.id}, {"label", s.label}});
  write_json_file(path / "manifest.json", {{"version", b.version},
                                           {"created", b.created},
                                           {"language", b.language},
                                           {"documents", docs},
                                           {"covariate_names", b.covariate_names},
                                           {"sections", sections},
                                           {"config", b.config}});

  for (const auto& s : b.sections) {
    const fs::path dir = path / "sections" / s.id;
    write_json_file(dir / "model.json", topics::to_json(s.model));
    write_json_file(dir / "distances.json", to_json(s.distances));
    for (const auto& [algo, variants] : s.clusters) {
      json list = json::array();
      for (const auto& v : variants) list.push_back(to_json(v));
      write_json_file(dir / "clusters" / (std::string(analysis::to_string(algo)) + ".json"),
                      {{"algorithm", analysis::to_string(algo)}, {"variants", list}});
    }
    for (const auto& [method, e] : s.mappings) {
      write_json_file(dir / "mapping" / (std::string(analysis::to_string(method)) + ".json"), to_json(e));
    }
    write_json_file(dir / "terms.json", to_json(s.terms));
    write_json_file(dir / "correlations.json", to_json(s.correlations));
    json summaries = json::array();
    for (const auto& sum : s.summaries) summaries.push_back(to_json(sum));
    write_json_file(dir / "summaries.json", {{"summaries", summaries}});
  }
}

AnalysisBundle load_bundle(const fs::path& path) {
  if (!fs::is_directory(path)) throw Error(ErrorCode::MissingFile, path.string());
  const json manifest = read_json_file(path / "manifest.json");
  const std::string mf = "manifest.json";
  AnalysisBundle b;
  b.version = get_as<int>(manifest, "version", mf);
  if (b.version != kBundleVersion) {
    throw Error(ErrorCode::VersionMismatch, mf + ": version " + std::to_string(b.version) + ", expected " +
                                                std::to_string(kBundleVersion));
  }
  b.created = get_as<std::string>(manifest, "created", mf);
  b.language = get_as<std::string>(manifest, "language", mf);
  b.covariate_names = get_as<std::vector<std::string>>(manifest, "covariate_names", mf);
  const json& docs = require(manifest, "documents", mf);
  if (!docs.is_array()) throw Error(ErrorCode::SchemaViolation, mf + ".documents: expected array");
  for (const auto& d : docs) b.documents.push_back(document_from_json(d, mf + ".documents"));
  b.config = require(manifest, "config", mf);

  const json& sections = require(manifest, "sections", mf);
  if (!sections.is_array()) throw Error(ErrorCode::SchemaViolation, mf + ".sections: expected array");
  for (const auto& entry : sections) {
    SectionResults s;
    s.id = get_as<std::string>(entry, "id", mf + ".sections");
    s.label = get_as<std::string>(entry, "label", mf + ".sections");
    if (!valid_section_id(s.id)) throw Error(ErrorCode::SchemaViolation, mf + ": bad section id '" + s.id + "'");
    const std::string base = "sections/" + s.id + "/";
    const fs::path dir = path / "sections" / s.id;

    s.model = load_part<topics::TopicModel>(path, base + "model.json",
                                            [](const json& j, const std::string&) { return topics::model_from_json(j); });
    s.distances = load_part<analysis::DistanceMatrix>(path, base + "distances.json", distances_from_json);

    if (fs::is_directory(dir / "clusters")) {
      for (auto algo : {analysis::ClusterAlgorithm::Hierarchical, analysis::ClusterAlgorithm::KMeans,
                        analysis::ClusterAlgorithm::Hdbscan}) {
        const std::string rel = base + "clusters/" + std::string(analysis::to_string(algo)) + ".json";
        if (!fs::exists(path / rel)) continue;
        s.clusters[algo] = load_part<std::vector<ClusterVariant>>(path, rel, [](const json& j, const std::string& w) {
          std::vector<ClusterVariant> out;
          const json& list = require(j, "variants", w);
          if (!list.is_array()) throw Error(ErrorCode::SchemaViolation, w + ".variants: expected array");
          for (const auto& v : list) out.push_back(variant_from_json(v, w));
          return out;
        });
      }
    }
    for (auto method : {analysis::MappingMethod::TSNE, analysis::MappingMethod::MDS}) {
      const std::string rel = base + "mapping/" + std::string(analysis::to_string(method)) + ".json";
      if (!fs::exists(path / rel)) continue;
      s.mappings[method] = load_part<analysis::Embedding2D>(path, rel, embedding_from_json);
    }
    s.terms = load_part<TopicTerms>(path, base + "terms.json", terms_from_json);
    s.correlations = load_part<analysis::CorrelationMatrix>(path, base + "correlations.json", correlations_from_json);
    s.summaries = load_part<std::vector<summarize::SectionSummary>>(
        path, base + "summaries.json", [](const json& j, const std::string& w) {
          std::vector<summarize::SectionSummary> out;
          const json& list = require(j, "summaries", w);
          if (!list.is_array()) throw Error(ErrorCode::SchemaViolation, w + ".summaries: expected array");
          for (const auto& x : list) out.push_back(summary_from_json(x, w + ".summaries"));
          return out;
        });
    b.sections.push_back(std::move(s));
  }
  validate(b);
  return b;
}

}  // namespace doclens::service
