#include "doclens/topics/lda.hpp"

#include <cmath>

#include "doclens/error.hpp"
#include "doclens/rng.hpp"

namespace doclens::topics {

double lda_log_likelihood(const std::vector<std::size_t>& topic_word,
                          const std::vector<std::size_t>& topic_totals,
                          const std::vector<std::size_t>& doc_topic,
                          const std::vector<std::size_t>& doc_totals, std::size_t num_topics,
                          std::size_t vocab_size, double alpha, double beta) {
  const double K = static_cast<double>(num_topics);
  const double V = static_cast<double>(vocab_size);
  const std::size_t D = doc_totals.size();

  double ll = K * (std::lgamma(V * beta) - V * std::lgamma(beta));
  for (std::size_t k = 0; k < num_topics; ++k) {
    for (std::size_t v = 0; v < vocab_size; ++v) {
      ll += std::lgamma(static_cast<double>(topic_word[k * vocab_size + v]) + beta);
    }
    ll -= std::lgamma(static_cast<double>(topic_totals[k]) + V * beta);
  }
  ll += static_cast<double>(D) * (std::lgamma(K * alpha) - K * std::lgamma(alpha));
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t k = 0; k < num_topics; ++k) {
      ll += std::lgamma(static_cast<double>(doc_topic[d * num_topics + k]) + alpha);
    }
    ll -= std::lgamma(static_cast<double>(doc_totals[d]) + K * alpha);
  }
  return ll;
}

TopicModel lda_fit(const corpus::BowMatrix& bow, const LdaParams& params) {
  const std::size_t K = params.num_topics;
  const std::size_t V = bow.vocab_size;
  const std::size_t D = bow.num_rows();
  if (D == 0) throw Error(ErrorCode::EmptyCorpus, "bag-of-words matrix has no rows");
  for (std::size_t d = 0; d < D; ++d) {
    if (bow.row_length(d) == 0) {
      throw Error(ErrorCode::EmptyCorpus, "document '" + bow.row_ids.at(d) + "' has no in-vocabulary tokens");
    }
  }
  if (K < 1) throw Error(ErrorCode::InvalidConfig, "K must be >= 1");
  if (K > V) {
    throw Error(ErrorCode::DegenerateK, "K=" + std::to_string(K) + " exceeds vocabulary size " + std::to_string(V));
  }
  if (params.iterations <= params.burn_in) throw Error(ErrorCode::InvalidConfig, "iterations must exceed burn_in");
  const double alpha = params.alpha.value_or(50.0 / static_cast<double>(K));
  const double beta = params.beta;
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha and beta must be positive");

  // Token stream in row order, token ids ascending within a row.
  std::vector<std::size_t> token_doc;
  std::vector<std::size_t> token_word;
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& e : bow.rows[d]) {
      for (std::size_t c = 0; c < e.count; ++c) {
        token_doc.push_back(d);
        token_word.push_back(e.token_id);
      }
    }
  }
  const std::size_t N = token_doc.size();

  std::vector<std::size_t> nkw(K * V, 0), nk(K, 0), ndk(D * K, 0), nd(D, 0);
  std::vector<std::size_t> z(N);
  Rng rng(params.seed);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t k = static_cast<std::size_t>(rng.below(K));
    z[i] = k;
    ++nkw[k * V + token_word[i]];
    ++nk[k];
    ++ndk[token_doc[i] * K + k];
    ++nd[token_doc[i]];
  }

  const double vbeta = static_cast<double>(V) * beta;
  std::vector<double> weights(K);
  TopicModel model;
  model.trace.reserve(params.iterations);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    for (std::size_t i = 0; i < N; ++i) {
      const std::size_t d = token_doc[i];
      const std::size_t w = token_word[i];
      const std::size_t old = z[i];
      --nkw[old * V + w];
      --nk[old];
      --ndk[d * K + old];

      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double p = (static_cast<double>(ndk[d * K + k]) + alpha) *
                         (static_cast<double>(nkw[k * V + w]) + beta) /
                         (static_cast<double>(nk[k]) + vbeta);
        total += p;
        weights[k] = total;
      }
      const double u = rng.uniform() * total;
      std::size_t k = 0;
      while (k + 1 < K && u >= weights[k]) ++k;

      z[i] = k;
      ++nkw[k * V + w];
      ++nk[k];
      ++ndk[d * K + k];
    }
    model.trace.push_back(lda_log_likelihood(nkw, nk, ndk, nd, K, V, alpha, beta));
  }

  model.method = TopicMethod::LDA;
  model.num_topics = K;
  model.alpha = alpha;
  model.beta = beta;
  model.seed = params.seed;
  model.phi = Matrix(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t v = 0; v < V; ++v) {
      model.phi(k, v) = (static_cast<double>(nkw[k * V + v]) + beta) / (static_cast<double>(nk[k]) + vbeta);
    }
  }
  model.theta = Matrix(D, K);
  const double kalpha = static_cast<double>(K) * alpha;
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t k = 0; k < K; ++k) {
      model.theta(d, k) = (static_cast<double>(ndk[d * K + k]) + alpha) / (static_cast<double>(nd[d]) + kalpha);
    }
  }
  model.vocab.resize(V);
  for (std::size_t v = 0; v < V; ++v) model.vocab[v] = "w" + std::to_string(v);
  model.doc_ids = bow.row_ids;
  model.doc_lengths.resize(D);
  for (std::size_t d = 0; d < D; ++d) model.doc_lengths[d] = static_cast<double>(nd[d]);
  model.labels.resize(K);
  for (std::size_t k = 0; k < K; ++k) model.labels[k] = "topic-" + std::to_string(k);
  return model;
}

}  // namespace doclens::topics
