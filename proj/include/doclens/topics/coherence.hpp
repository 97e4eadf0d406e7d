#pragma once

#include <string_view>
#include <vector>

#include "doclens/corpus/vocabulary.hpp"
#include "doclens/topics/model.hpp"

namespace doclens::topics {

enum class CoherenceMetric { UMass, NPMI };

std::string_view to_string(CoherenceMetric metric) noexcept;
CoherenceMetric coherence_from_string(std::string_view name);

/// Per-topic coherence over the top_n words of each phi row (clamped to V).
/// Document frequencies are counted over the rows of `bow`.
///
/// UMass: sum over ranked pairs (i < j) of log((D(w_i, w_j) + 1) / D(w_i)),
/// where w_i is the higher-ranked word.
/// NPMI: mean over pairs of log(p_ij / (p_i p_j)) / -log p_ij; a pair that
/// never co-occurs scores -1 and a pair present in every document (0/0)
/// scores 0.
std::vector<double> topic_coherences(const TopicModel& model, const corpus::BowMatrix& bow,
                                     CoherenceMetric metric, std::size_t top_n = 10);

/// Mean of topic_coherences.
double coherence(const TopicModel& model, const corpus::BowMatrix& bow, CoherenceMetric metric,
                 std::size_t top_n = 10);

}  // namespace doclens::topics
