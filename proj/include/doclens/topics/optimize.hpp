#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doclens/corpus/vocabulary.hpp"
#include "doclens/topics/coherence.hpp"
#include "doclens/topics/model.hpp"
#include "json.hpp"

namespace doclens::topics {

struct FitConfig {
  TopicMethod method = TopicMethod::LDA;
  std::vector<std::size_t> k_candidates{5, 10, 15};
  std::vector<std::uint64_t> seeds{0};
  std::size_t iterations = 1000;  // LDA sweeps, NMF max_iter
  std::size_t burn_in = 100;      // LDA
  double tol = 1e-6;              // NMF
  CoherenceMetric coherence_metric = CoherenceMetric::UMass;
  std::size_t top_n = 10;
  std::optional<double> alpha;  // LDA; 50 / K when unset
  double beta = 0.01;           // LDA
  bool nmf_tfidf = true;        // NMF input weighting (false: raw counts)
  /// Worker threads for the candidate grid; 0 picks hardware concurrency.
  std::size_t parallelism = 0;

  bool operator==(const FitConfig&) const = default;
};

/// Throws InvalidConfig naming the offending field.
void validate(const FitConfig& config);

FitConfig fit_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FitConfig& config);

struct CandidateScore {
  std::size_t num_topics = 0;
  std::uint64_t seed = 0;
  double coherence = 0.0;

  bool operator==(const CandidateScore&) const = default;
};

struct OptimizationResult {
  TopicModel best;
  /// Every (K, seed) candidate in grid order.
  std::vector<CandidateScore> report;
};

/// Fits one candidate and scores it; vocab and doc lengths are attached.
TopicModel fit_candidate(const corpus::BowMatrix& bow, const std::vector<std::string>& vocab,
                         const FitConfig& config, std::size_t num_topics, std::uint64_t seed);

/// Fits every (K, seed) pair and returns the highest-coherence model; ties
/// go to the smaller K, then the smaller seed. Candidates may run in
/// parallel; each owns its seed, so the result does not depend on
/// scheduling. Fit errors are rethrown annotated with the candidate.
OptimizationResult optimize_model(const corpus::BowMatrix& bow, const std::vector<std::string>& vocab,
                                  const FitConfig& config);

}  // namespace doclens::topics
