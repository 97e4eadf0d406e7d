#include "doclens/analysis/terms.hpp"

#include <algorithm>
#include <cmath>

#include "doclens/error.hpp"

namespace doclens::analysis {

std::vector<double> topic_prevalence(const topics::TopicModel& model) {
  const std::size_t K = model.phi.rows();
  std::vector<double> pt(K, 0.0);
  const bool weighted = model.doc_lengths.size() == model.theta.rows();
  double total = 0.0;
  for (std::size_t d = 0; d < model.theta.rows(); ++d) {
    const double w = weighted ? model.doc_lengths[d] : 1.0;
    for (std::size_t k = 0; k < K; ++k) pt[k] += w * model.theta(d, k);
    total += w;
  }
  if (total <= 0.0) {
    std::fill(pt.begin(), pt.end(), 1.0 / static_cast<double>(K));
    return pt;
  }
  for (double& v : pt) v /= total;
  return pt;
}

std::vector<double> term_marginal(const topics::TopicModel& model, const std::vector<double>& prevalence) {
  std::vector<double> pw(model.phi.cols(), 0.0);
  for (std::size_t k = 0; k < model.phi.rows(); ++k) {
    for (std::size_t v = 0; v < model.phi.cols(); ++v) pw[v] += model.phi(k, v) * prevalence[k];
  }
  return pw;
}

namespace {

std::string term_name(const topics::TopicModel& model, std::size_t v) {
  return v < model.vocab.size() ? model.vocab[v] : "w" + std::to_string(v);
}

}  // namespace

TermRanking relevance(const topics::TopicModel& model, double lambda, std::size_t top_n) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "lambda = " + std::to_string(lambda) + " outside [0, 1]");
  }
  const auto pw = term_marginal(model, topic_prevalence(model));
  TermRanking out;
  out.lambda = lambda;
  out.top_n = top_n;
  for (std::size_t k = 0; k < model.phi.rows(); ++k) {
    std::vector<TermScore> scores;
    for (std::size_t v = 0; v < model.phi.cols(); ++v) {
      const double phi = model.phi(k, v);
      if (phi <= 0.0) continue;
      const double lift = std::log(phi / pw[v]);
      scores.push_back({v, term_name(model, v), lambda * std::log(phi) + (1.0 - lambda) * lift, phi, lift});
    }
    std::stable_sort(scores.begin(), scores.end(),
                     [](const TermScore& a, const TermScore& b) { return a.score > b.score; });
    if (scores.size() > top_n) scores.resize(top_n);
    out.topics.push_back(std::move(scores));
  }
  return out;
}

std::vector<TermSaliency> saliency(const topics::TopicModel& model) {
  const auto pt = topic_prevalence(model);
  const auto pw = term_marginal(model, pt);
  std::vector<TermSaliency> out;
  for (std::size_t v = 0; v < model.phi.cols(); ++v) {
    double kl = 0.0;
    if (pw[v] > 0.0) {
      for (std::size_t k = 0; k < model.phi.rows(); ++k) {
        const double post = model.phi(k, v) * pt[k] / pw[v];
        if (post > 0.0) kl += post * std::log(post / pt[k]);
      }
    }
    kl = std::max(0.0, kl);
    out.push_back({v, term_name(model, v), pw[v] * kl, kl, pw[v]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TermSaliency& a, const TermSaliency& b) { return a.saliency > b.saliency; });
  return out;
}

}  // namespace doclens::analysis
