#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "doclens/analysis/clustering.hpp"
#include "doclens/analysis/correlation.hpp"
#include "doclens/analysis/divergence.hpp"
#include "doclens/analysis/manova.hpp"
#include "doclens/analysis/mapping.hpp"
#include "doclens/analysis/terms.hpp"
#include "doclens/corpus/corpus.hpp"
#include "doclens/summarize/summarize.hpp"
#include "doclens/topics/model.hpp"
#include "json.hpp"

namespace doclens::service {

inline constexpr int kBundleVersion = 1;

/// One precomputed clustering with the MANOVA of its labels.
struct ClusterVariant {
  analysis::ClusterResult result;
  analysis::ManovaReport manova;

  bool operator==(const ClusterVariant&) const = default;
};

struct TopicTerms {
  /// Ranking at the default lambda.
  analysis::TermRanking ranking;
  std::vector<analysis::TermSaliency> saliency;
  /// p(t), token-weighted.
  std::vector<double> prevalence;
  /// K x 2 classical MDS of the Jensen-Shannon distances between phi rows.
  Matrix intertopic;

  bool operator==(const TopicTerms&) const = default;
};

struct SectionResults {
  std::string id;
  std::string label;
  topics::TopicModel model;
  analysis::DistanceMatrix distances;
  std::map<analysis::ClusterAlgorithm, std::vector<ClusterVariant>> clusters;
  std::map<analysis::MappingMethod, analysis::Embedding2D> mappings;
  TopicTerms terms;
  analysis::CorrelationMatrix correlations;
  std::vector<summarize::SectionSummary> summaries;

  bool operator==(const SectionResults&) const = default;
};

struct AnalysisBundle {
  int version = kBundleVersion;
  /// ISO 8601 UTC creation time.
  std::string created;
  std::string language = "en";
  std::vector<corpus::DocumentInfo> documents;
  std::vector<std::string> covariate_names;
  std::vector<SectionResults> sections;
  /// Pipeline configuration the results were produced with.
  nlohmann::json config = nlohmann::json::object();

  const corpus::DocumentInfo* find_document(const std::string& doc_id) const;
  const SectionResults* find_section(const std::string& section_id) const;
  std::vector<std::string> section_ids() const;

  bool operator==(const AnalysisBundle&) const = default;
};

nlohmann::json to_json(const ClusterVariant& v);
ClusterVariant variant_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json to_json(const TopicTerms& t);
TopicTerms terms_from_json(const nlohmann::json& j, const std::string& where);

/// Throws DanglingReference naming the first id, index or file that does
/// not resolve, and SchemaViolation for malformed content.
void validate(const AnalysisBundle& bundle);

/// Validates, then writes manifest.json and sections/<id>/{model,
/// distances, terms, summaries, correlations}.json, clusters/<algo>.json
/// and mapping/<method>.json. An existing bundle at `path` is replaced;
/// any other non-empty directory is refused with IoError.
void save_bundle(const AnalysisBundle& bundle, const std::filesystem::path& path);

/// Throws VersionMismatch, SchemaViolation (naming the file) and the
/// errors of validate().
AnalysisBundle load_bundle(const std::filesystem::path& path);

/// Section ids become directory names, so they are restricted to
/// [A-Za-z0-9_.-] and may not start with a dot.
bool valid_section_id(const std::string& id);

}  // namespace doclens::service
