#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/matrix.hpp"
#include "json.hpp"

namespace doclens::topics {

enum class TopicMethod { LDA, NMF };

std::string_view to_string(TopicMethod method) noexcept;
TopicMethod method_from_string(std::string_view name);

/// Fitted topic model. phi is K x V (topic-word), theta is D x K
/// (document-topic); every row of both sums to 1.
struct TopicModel {
  TopicMethod method = TopicMethod::LDA;
  std::size_t num_topics = 0;
  Matrix phi;
  Matrix theta;
  double alpha = 0.0;  // LDA only
  double beta = 0.0;   // LDA only
  std::uint64_t seed = 0;
  double coherence = 0.0;
  std::vector<std::string> labels;
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  /// Token count of each document; weights p(t) in term ranking.
  std::vector<double> doc_lengths;
  /// Per-iteration objective: joint log-likelihood (LDA) or Frobenius
  /// reconstruction error (NMF).
  std::vector<double> trace;

  bool operator==(const TopicModel&) const = default;
};

/// Throws SchemaViolation when shapes disagree, rows are not stochastic
/// within 1e-9, or any entry is negative.
void check_invariants(const TopicModel& model);

nlohmann::json to_json(const TopicModel& model);
TopicModel model_from_json(const nlohmann::json& doc);

void save_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_model(const std::filesystem::path& path);

/// Indices of the n largest entries, ties broken by the smaller index.
std::vector<std::size_t> top_indices(std::span<const double> values, std::size_t n);

/// Normalizes a non-negative vector to sum 1; an all-zero vector becomes
/// uniform.
void normalize_row(std::span<double> row);

}  // namespace doclens::topics
