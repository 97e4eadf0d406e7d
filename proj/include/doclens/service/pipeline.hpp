#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/analysis/clustering.hpp"
#include "doclens/analysis/correlation.hpp"
#include "doclens/analysis/mapping.hpp"
#include "doclens/service/bundle.hpp"
#include "doclens/service/serialize.hpp"
#include "doclens/summarize/embeddings.hpp"
#include "doclens/summarize/llm.hpp"
#include "doclens/summarize/summarize.hpp"
#include "doclens/topics/optimize.hpp"
#include "json.hpp"

namespace doclens::service {

enum class LabelMode { Default, Stub, Llm };

struct HdbscanParams {
  std::size_t min_cluster_size = 3;
  std::size_t min_samples = 2;
};

/// Every clustering and mapping variant the UI may ask for.
struct AnalysisConfig {
  analysis::Metric metric = analysis::Metric::JSD;
  analysis::Linkage linkage = analysis::Linkage::Average;
  std::vector<std::size_t> hierarchical_k{2, 3, 4};
  std::vector<std::size_t> kmeans_k{2, 3, 4};
  std::uint64_t kmeans_seed = 0;
  std::size_t kmeans_restarts = 10;
  analysis::KMeansSpace kmeans_space = analysis::KMeansSpace::Hellinger;
  std::vector<HdbscanParams> hdbscan{HdbscanParams{}};
  bool tsne = true;
  analysis::TsneParams tsne_params;
  bool mds = true;
  double lambda = 0.6;
  std::size_t top_n = 30;
  analysis::CorrelationMethod correlation = analysis::CorrelationMethod::Pearson;
  std::map<std::string, std::string> section_labels;
};

enum class EmbeddingSource { Builtin, Http };

struct SummarizeConfig {
  summarize::SummaryOptions options;
  summarize::HttpLlmConfig llm;
  EmbeddingSource embeddings = EmbeddingSource::Builtin;
  summarize::HttpEmbeddingConfig http_embeddings;
};

/// The file passed to `fit --config`; a normalized copy is kept in the
/// workspace for the later stages and the bundle.
struct PipelineConfig {
  std::size_t min_df = 2;
  double max_df = 0.95;
  topics::FitConfig fit;
  LabelMode labels = LabelMode::Default;
  AnalysisConfig analysis;
  SummarizeConfig summarize;
};

/// Throws InvalidConfig naming the bad field.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& c);

/// Intermediate results live in one workspace directory:
///   corpus.json, config.json, models/<section>.json,
///   analysis/<section>.json, summaries.json, .stamps/<stage>.json
struct Workspace {
  std::filesystem::path root;

  std::filesystem::path corpus() const { return root / "corpus.json"; }
  std::filesystem::path config() const { return root / "config.json"; }
  std::filesystem::path models() const { return root / "models"; }
  std::filesystem::path model(const std::string& section) const { return models() / (section + ".json"); }
  std::filesystem::path analysis(const std::string& section) const { return root / "analysis" / (section + ".json"); }
  std::filesystem::path summaries() const { return root / "summaries.json"; }
  std::filesystem::path stamp(const std::string& stage) const { return root / ".stamps" / (stage + ".json"); }

  /// Section ids with a fitted model, in corpus order.
  std::vector<std::string> fitted_sections() const;
  /// The stored config, or defaults when fit has not run.
  PipelineConfig load_config() const;
};

/// Progress events (one JSON object each) for the caller to report.
using Progress = std::function<void(const nlohmann::json&)>;

enum class StageOutcome { Ran, Skipped };

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);

/// Stage fingerprints: a stage whose stamp matches its current inputs is
/// skipped unless forced.
bool stamp_matches(const Workspace& ws, const std::string& stage, std::uint64_t fingerprint);
void write_stamp(const Workspace& ws, const std::string& stage, std::uint64_t fingerprint);

struct StageOptions {
  bool force = false;
  Progress progress;
};

StageOutcome run_ingest(const std::filesystem::path& manifest, const Workspace& ws, const StageOptions& opts);

/// `sections` is "all" or a comma-separated list of section ids.
StageOutcome run_fit(const Workspace& ws, const std::string& sections, const PipelineConfig& config,
                     const StageOptions& opts,
                     const summarize::LlmClient* labeler = nullptr);

StageOutcome run_analyze(const Workspace& ws, const StageOptions& opts);

/// Summarizes every section of the corpus with the given client and the
/// configured embeddings. `client_tag` distinguishes clients in the stamp.
StageOutcome run_summarize(const Workspace& ws, const summarize::LlmClient& client, const std::string& client_tag,
                           const StageOptions& opts);

/// Assembles and saves the bundle. The creation time is `timestamp` when
/// given, else SOURCE_DATE_EPOCH, else the current time.
StageOutcome run_export(const Workspace& ws, const std::filesystem::path& out,
                        const std::optional<std::string>& timestamp, const StageOptions& opts);

/// Analysis of one fitted section (everything but summaries).
SectionResults analyze_section(const topics::TopicModel& model, const corpus::ProcessedCorpus& corpus,
                               const std::string& section_id, const AnalysisConfig& config,
                               const Progress& progress = {});

/// The bundle the workspace currently describes.
AnalysisBundle assemble_bundle(const Workspace& ws, const std::string& created);

/// ISO 8601 UTC ("2024-01-02T03:04:05Z") for seconds since the epoch.
std::string iso8601_utc(std::int64_t seconds);

std::string humanize(const std::string& id);

}  // namespace doclens::service
