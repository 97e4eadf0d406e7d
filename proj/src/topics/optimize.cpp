#include "doclens/topics/optimize.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "doclens/error.hpp"
#include "doclens/topics/lda.hpp"
#include "doclens/topics/nmf.hpp"

namespace doclens::topics {

using nlohmann::json;

void validate(const FitConfig& c) {
  if (c.k_candidates.empty()) throw Error(ErrorCode::InvalidConfig, "k_candidates: must not be empty");
  for (std::size_t k : c.k_candidates) {
    if (k < 2) throw Error(ErrorCode::InvalidConfig, "k_candidates: every K must be >= 2");
  }
  if (c.seeds.empty()) throw Error(ErrorCode::InvalidConfig, "seeds: must not be empty");
  if (c.iterations <= c.burn_in) throw Error(ErrorCode::InvalidConfig, "iterations: must exceed burn_in");
  if (!(c.tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol: must be positive");
  if (c.top_n < 2) throw Error(ErrorCode::InvalidConfig, "top_n: must be >= 2");
  if (c.alpha && !(*c.alpha > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha: must be positive");
  if (!(c.beta > 0.0)) throw Error(ErrorCode::InvalidConfig, "beta: must be positive");
}

FitConfig fit_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "fit config: expected object");
  FitConfig c;
  try {
    if (j.contains("method")) c.method = method_from_string(j["method"].get<std::string>());
    if (j.contains("k_candidates")) c.k_candidates = j["k_candidates"].get<std::vector<std::size_t>>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    c.iterations = j.value("iterations", c.iterations);
    c.burn_in = j.value("burn_in", c.burn_in);
    c.tol = j.value("tol", c.tol);
    if (j.contains("coherence_metric")) c.coherence_metric = coherence_from_string(j["coherence_metric"].get<std::string>());
    c.top_n = j.value("top_n", c.top_n);
    if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
    c.beta = j.value("beta", c.beta);
    c.nmf_tfidf = j.value("nmf_tfidf", c.nmf_tfidf);
    c.parallelism = j.value("parallelism", c.parallelism);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("fit config: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  validate(c);
  return c;
}

json to_json(const FitConfig& c) {
  json j{
      {"method", std::string(to_string(c.method))},
      {"k_candidates", c.k_candidates},
      {"seeds", c.seeds},
      {"iterations", c.iterations},
      {"burn_in", c.burn_in},
      {"tol", c.tol},
      {"coherence_metric", std::string(to_string(c.coherence_metric))},
      {"top_n", c.top_n},
      {"beta", c.beta},
      {"nmf_tfidf", c.nmf_tfidf},
  };
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  return j;
}

TopicModel fit_candidate(const corpus::BowMatrix& bow, const std::vector<std::string>& vocab,
                         const FitConfig& config, std::size_t num_topics, std::uint64_t seed) {
  if (vocab.size() != bow.vocab_size) {
    throw Error(ErrorCode::DimensionMismatch, "vocabulary size differs from the bag-of-words width");
  }
  TopicModel model;
  if (config.method == TopicMethod::LDA) {
    LdaParams p;
    p.num_topics = num_topics;
    p.alpha = config.alpha;
    p.beta = config.beta;
    p.iterations = config.iterations;
    p.burn_in = config.burn_in;
    p.seed = seed;
    model = lda_fit(bow, p);
  } else {
    if (num_topics > bow.vocab_size) {
      throw Error(ErrorCode::DegenerateK, "K=" + std::to_string(num_topics) + " exceeds vocabulary size " +
                                              std::to_string(bow.vocab_size));
    }
    NmfParams p;
    p.num_topics = num_topics;
    p.max_iter = config.iterations;
    p.tol = config.tol;
    p.seed = seed;
    model = nmf_fit(config.nmf_tfidf ? corpus::tfidf(bow) : bow.dense(), p);
    model.doc_ids = bow.row_ids;
    for (std::size_t d = 0; d < bow.num_rows(); ++d) {
      model.doc_lengths[d] = static_cast<double>(bow.row_length(d));
    }
  }
  model.vocab = vocab;
  model.coherence = coherence(model, bow, config.coherence_metric, config.top_n);
  return model;
}

OptimizationResult optimize_model(const corpus::BowMatrix& bow, const std::vector<std::string>& vocab,
                                  const FitConfig& config) {
  validate(config);
  struct Job {
    std::size_t k;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t k : config.k_candidates) {
    for (std::uint64_t s : config.seeds) jobs.push_back({k, s});
  }

  std::vector<TopicModel> models(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        models[i] = fit_candidate(bow, vocab, config, jobs[i].k, jobs[i].seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.parallelism == 0 ? std::thread::hardware_concurrency() : config.parallelism;
  threads = std::max<std::size_t>(1, std::min(threads, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = "candidate K=" + std::to_string(jobs[i].k) + " seed=" + std::to_string(jobs[i].seed);
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.what());
    }
  }

  OptimizationResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    result.report.push_back({jobs[i].k, jobs[i].seed, models[i].coherence});
    const auto& b = jobs[best];
    const double cb = models[best].coherence;
    const double ci = models[i].coherence;
    // Scores this close differ only by summation order.
    const bool tied = std::abs(ci - cb) <= 1e-12 * std::max(1.0, std::abs(cb));
    if ((!tied && ci > cb) || (tied && (jobs[i].k < b.k || (jobs[i].k == b.k && jobs[i].seed < b.seed)))) best = i;
  }
  result.best = std::move(models[best]);
  return result;
}

}  // namespace doclens::topics
