#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "doclens/topics/model.hpp"

namespace doclens::analysis {

struct TermScore {
  std::size_t term_id = 0;
  std::string term;
  double score = 0.0;
  /// p(w|t)
  double phi = 0.0;
  /// log(p(w|t) / p(w))
  double lift = 0.0;

  bool operator==(const TermScore&) const = default;
};

struct TermRanking {
  double lambda = 0.6;
  std::size_t top_n = 0;
  /// Per topic, descending by score (smaller term id on ties).
  std::vector<std::vector<TermScore>> topics;

  bool operator==(const TermRanking&) const = default;
};

struct TermSaliency {
  std::size_t term_id = 0;
  std::string term;
  double saliency = 0.0;
  double distinctiveness = 0.0;
  /// p(w)
  double frequency = 0.0;

  bool operator==(const TermSaliency&) const = default;
};

/// p(t): mean theta weighted by document token counts (uniform weights when
/// the model has no lengths).
std::vector<double> topic_prevalence(const topics::TopicModel& model);

/// p(w) = sum_t p(w|t) p(t).
std::vector<double> term_marginal(const topics::TopicModel& model, const std::vector<double>& prevalence);

/// lambda log p(w|t) + (1 - lambda) log(p(w|t) / p(w)). Terms with
/// p(w|t) = 0 are not ranked. Throws InvalidConfig for lambda outside [0, 1].
TermRanking relevance(const topics::TopicModel& model, double lambda, std::size_t top_n);

/// p(w) * sum_t p(t|w) log(p(t|w) / p(t)) for every term, descending
/// (smaller term id on ties). Scores are non-negative.
std::vector<TermSaliency> saliency(const topics::TopicModel& model);

}  // namespace doclens::analysis
