#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "doclens/analysis/clustering.hpp"
#include "doclens/analysis/correlation.hpp"
#include "doclens/analysis/divergence.hpp"
#include "doclens/analysis/manova.hpp"
#include "doclens/analysis/mapping.hpp"
#include "doclens/analysis/terms.hpp"
#include "doclens/corpus/corpus.hpp"
#include "doclens/error.hpp"
#include "doclens/summarize/summarize.hpp"
#include "json.hpp"

/// JSON encodings of the pipeline artifacts. Readers throw SchemaViolation
/// naming the offending field; `where` prefixes every message.
namespace doclens::service {

using nlohmann::json;

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& where);

json to_json(const analysis::DistanceMatrix& d);
analysis::DistanceMatrix distances_from_json(const json& j, const std::string& where);

json to_json(const analysis::ClusterResult& c);
analysis::ClusterResult cluster_from_json(const json& j, const std::string& where);

json to_json(const analysis::ManovaReport& r);
analysis::ManovaReport manova_from_json(const json& j, const std::string& where);

json to_json(const analysis::Embedding2D& e);
analysis::Embedding2D embedding_from_json(const json& j, const std::string& where);

json to_json(const analysis::TermRanking& r);
analysis::TermRanking ranking_from_json(const json& j, const std::string& where);

json to_json(const analysis::TermSaliency& s);
analysis::TermSaliency saliency_from_json(const json& j, const std::string& where);

json to_json(const analysis::CorrelationMatrix& m);
analysis::CorrelationMatrix correlations_from_json(const json& j, const std::string& where);

json to_json(const summarize::SectionSummary& s);
summarize::SectionSummary summary_from_json(const json& j, const std::string& where);

json to_json(const corpus::DocumentInfo& d);
corpus::DocumentInfo document_from_json(const json& j, const std::string& where);

json to_json(const corpus::PreprocessOptions& o);
corpus::PreprocessOptions preprocess_from_json(const json& j, const std::string& where);

/// Processed corpus plus the preprocessing it was built with.
struct StoredCorpus {
  corpus::ProcessedCorpus corpus;
  corpus::PreprocessOptions options;
};

json to_json(const StoredCorpus& c);
StoredCorpus corpus_from_json(const json& j, const std::string& where);

/// Field access that names what is missing or mistyped.
const json& require(const json& obj, const char* key, const std::string& where);

template <class T>
T get_as(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::SchemaViolation, where + "." + key + ": wrong type");
  }
}

json optional_json(const std::optional<double>& v);
std::optional<double> optional_number(const json& obj, const char* key, const std::string& where);

/// Parses a file, raising MissingFile or SchemaViolation naming the path.
json read_json_file(const std::filesystem::path& path);

/// Writes `j` with one-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace doclens::service
