#include "doclens/topics/coherence.hpp"

#include <cmath>

#include "doclens/error.hpp"

namespace doclens::topics {

std::string_view to_string(CoherenceMetric metric) noexcept {
  return metric == CoherenceMetric::UMass ? "umass" : "npmi";
}

CoherenceMetric coherence_from_string(std::string_view name) {
  if (name == "umass" || name == "UMASS") return CoherenceMetric::UMass;
  if (name == "npmi" || name == "NPMI") return CoherenceMetric::NPMI;
  throw Error(ErrorCode::InvalidConfig, "unknown coherence metric '" + std::string(name) + "'");
}

namespace {

// Row membership per token: present[v][d].
std::vector<std::vector<bool>> presence(const corpus::BowMatrix& bow) {
  std::vector<std::vector<bool>> present(bow.vocab_size, std::vector<bool>(bow.num_rows(), false));
  for (std::size_t d = 0; d < bow.num_rows(); ++d) {
    for (const auto& e : bow.rows[d]) present[e.token_id][d] = true;
  }
  return present;
}

}  // namespace

std::vector<double> topic_coherences(const TopicModel& model, const corpus::BowMatrix& bow,
                                     CoherenceMetric metric, std::size_t top_n) {
  if (model.phi.cols() != bow.vocab_size) {
    throw Error(ErrorCode::DimensionMismatch, "model vocabulary size differs from the bag-of-words width");
  }
  const auto present = presence(bow);
  const std::size_t D = bow.num_rows();
  auto df = [&](std::size_t v) {
    std::size_t n = 0;
    for (bool b : present[v]) n += b ? 1 : 0;
    return n;
  };
  auto co_df = [&](std::size_t a, std::size_t b) {
    std::size_t n = 0;
    for (std::size_t d = 0; d < D; ++d) n += (present[a][d] && present[b][d]) ? 1 : 0;
    return n;
  };

  std::vector<double> scores;
  scores.reserve(model.num_topics);
  for (std::size_t k = 0; k < model.num_topics; ++k) {
    const auto top = top_indices(model.phi.row(k), top_n);
    double score = 0.0;
    std::size_t pairs = 0;
    for (std::size_t j = 1; j < top.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double dij = static_cast<double>(co_df(top[i], top[j]));
        if (metric == CoherenceMetric::UMass) {
          const double di = static_cast<double>(df(top[i]));
          if (di > 0.0) score += std::log((dij + 1.0) / di);
        } else {
          const double n = static_cast<double>(D);
          const double pij = dij / n;
          const double pi = static_cast<double>(df(top[i])) / n;
          const double pj = static_cast<double>(df(top[j])) / n;
          double npmi = 0.0;
          if (pij == 0.0) {
            npmi = -1.0;
          } else if (pij < 1.0) {
            npmi = std::log(pij / (pi * pj)) / -std::log(pij);
          }
          score += npmi;
        }
        ++pairs;
      }
    }
    if (metric == CoherenceMetric::NPMI && pairs > 0) score /= static_cast<double>(pairs);
    scores.push_back(score);
  }
  return scores;
}

double coherence(const TopicModel& model, const corpus::BowMatrix& bow, CoherenceMetric metric,
                 std::size_t top_n) {
  const auto scores = topic_coherences(model, bow, metric, top_n);
  if (scores.empty()) return 0.0;
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace doclens::topics
