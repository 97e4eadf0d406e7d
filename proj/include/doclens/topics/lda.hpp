#pragma once

#include <cstdint>
#include <optional>

#include "doclens/corpus/vocabulary.hpp"
#include "doclens/topics/model.hpp"

namespace doclens::topics {

struct LdaParams {
  std::size_t num_topics = 10;
  /// Document-topic concentration; defaults to 50 / K.
  std::optional<double> alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 100;
  std::uint64_t seed = 0;
};

/// Collapsed Gibbs sampling for LDA.
///
/// Every token starts with a uniformly drawn topic; each sweep resamples
/// every token's topic from
///
///   p(z = k | rest) ~ (n_dk + alpha) (n_kw + beta) / (n_k + V beta)
///
/// with the token's own assignment removed from the counts. phi and theta
/// are read from the final state:
///
///   phi_kv   = (n_kv + beta)  / (n_k + V beta)
///   theta_dk = (n_dk + alpha) / (n_d + K alpha)
///
/// The joint log-likelihood log p(w, z) is recorded after every sweep.
///
/// The model's vocab holds placeholder names ("w<id>") until the caller
/// attaches the real tokens.
///
/// Throws EmptyCorpus (no rows, or a row without tokens), DegenerateK
/// (K > vocabulary size) and InvalidConfig.
TopicModel lda_fit(const corpus::BowMatrix& bow, const LdaParams& params);

/// log p(w, z) for the given count tables (Griffiths & Steyvers).
double lda_log_likelihood(const std::vector<std::size_t>& topic_word,  // K x V
                          const std::vector<std::size_t>& topic_totals,
                          const std::vector<std::size_t>& doc_topic,   // D x K
                          const std::vector<std::size_t>& doc_totals, std::size_t num_topics,
                          std::size_t vocab_size, double alpha, double beta);

}  // namespace doclens::topics
