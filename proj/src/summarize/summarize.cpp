#include "doclens/summarize/summarize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "doclens/analysis/clustering.hpp"
#include "doclens/error.hpp"

namespace doclens::summarize {

std::size_t estimated_tokens(std::size_t words) {
  return static_cast<std::size_t>(std::ceil(1.3 * static_cast<double>(words)));
}

std::vector<std::size_t> extractive_select(const std::vector<Embedding>& vectors, std::size_t n, std::uint64_t seed) {
  const std::size_t count = vectors.size();
  if (n < 1 || n > count) {
    throw Error(ErrorCode::BadN, "n = " + std::to_string(n) + " outside [1, " + std::to_string(count) + "]");
  }
  const std::size_t dim = vectors.front().size();
  Matrix X(count, dim);
  for (std::size_t i = 0; i < count; ++i) {
    if (vectors[i].size() != dim) throw Error(ErrorCode::DimensionMismatch, "sentence vector " + std::to_string(i));
    std::copy(vectors[i].begin(), vectors[i].end(), X.row(i).begin());
  }
  const auto clusters = analysis::kmeans(X, n, seed, 4, analysis::KMeansSpace::Euclidean);
  const Matrix& C = clusters.centroids;

  // Sentences ranked by distance to each centroid, lower index on ties.
  std::vector<std::vector<std::size_t>> ranked(C.rows());
  for (std::size_t c = 0; c < C.rows(); ++c) {
    std::vector<double> d(count);
    for (std::size_t i = 0; i < count; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += (X(i, j) - C(c, j)) * (X(i, j) - C(c, j));
      d[i] = s;
    }
    ranked[c].resize(count);
    std::iota(ranked[c].begin(), ranked[c].end(), 0);
    std::stable_sort(ranked[c].begin(), ranked[c].end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  }

  std::vector<char> used(count, 0);
  std::vector<std::size_t> picked;
  std::vector<std::size_t> cursor(C.rows(), 0);
  std::vector<std::size_t> pending;
  for (std::size_t c = 0; c < C.rows(); ++c) {
    const std::size_t first = ranked[c][0];
    if (used[first]) {
      pending.push_back(c);
    } else {
      used[first] = 1;
      picked.push_back(first);
    }
  }
  // Duplicate picks, and centroids missing because of identical vectors,
  // are filled from the next-nearest unused sentences.
  for (std::size_t round = 0; picked.size() < n; ++round) {
    const std::size_t c = round < pending.size() ? pending[round] : (round - pending.size()) % C.rows();
    auto& at = cursor[c];
    while (used[ranked[c][at]]) ++at;
    used[ranked[c][at]] = 1;
    picked.push_back(ranked[c][at]);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

Completion abstractive_summary(const LlmClient& client, std::string_view text, const AbstractiveOptions& options) {
  const std::size_t words = word_count(text);
  if (words > options.word_budget) {
    throw Error(ErrorCode::InputTooLarge, "input has " + std::to_string(words) + " words; the budget is " +
                                              std::to_string(options.word_budget));
  }
  ChatRequest request;
  request.task = LlmTask::Summarize;
  request.source_text = std::string(text);
  request.message = request.source_text + "\n\n" + options.prompt;
  return client.complete(request);
}

std::string_view to_string(SummaryPath p) noexcept { return p == SummaryPath::Direct ? "direct" : "extractive"; }

SummaryPath summary_path_from_string(std::string_view s) {
  if (s == "direct") return SummaryPath::Direct;
  if (s == "extractive") return SummaryPath::Extractive;
  throw Error(ErrorCode::SchemaViolation, "path: unknown value '" + std::string(s) + "'");
}

std::string_view section_body(const corpus::Section& section) {
  const std::string_view text = section.raw_text;
  const auto nl = text.find('\n');
  return nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
}

namespace {

std::string join_selected(const std::vector<std::string>& sentences, const std::vector<std::size_t>& picked) {
  std::string out;
  for (std::size_t i : picked) {
    if (!out.empty()) out += ' ';
    out += sentences[i];
  }
  return out;
}

}  // namespace

SectionSummary summarize_section(const corpus::Section& section, const LlmClient& client,
                                 const EmbeddingProvider& provider, const SummaryOptions& options) {
  SectionSummary out;
  out.doc_id = section.doc_id;
  out.section_id = section.section_id;
  const std::string_view body = section_body(section);
  for (auto& s : split_sentences(body).sentences) out.sentences.push_back(std::move(s.text));
  const std::size_t budget = options.abstractive.word_budget;

  std::string input;
  if (word_count(body) <= budget) {
    out.path = SummaryPath::Direct;
    out.selected.resize(out.sentences.size());
    std::iota(out.selected.begin(), out.selected.end(), 0);
    input = join_selected(out.sentences, out.selected);
  } else {
    out.path = SummaryPath::Extractive;
    const std::size_t count = out.sentences.size();
    const auto vectors = provider.embed(out.sentences);
    const auto bound = static_cast<std::size_t>(std::ceil(options.extractive_ratio * static_cast<double>(count)));
    std::size_t n = std::min(count, std::max(options.min_sentences, bound));
    while (true) {
      auto picked = extractive_select(vectors, n, options.seed);
      std::string text = join_selected(out.sentences, picked);
      const std::size_t words = word_count(text);
      if (words <= budget) {
        out.selected = std::move(picked);
        input = std::move(text);
        break;
      }
      if (n == 1) {
        throw Error(ErrorCode::InputTooLarge, "section '" + section.section_id + "' of '" + section.doc_id +
                                                  "': no sentence selection fits the budget of " +
                                                  std::to_string(budget) + " words");
      }
      const auto scaled = static_cast<std::size_t>(static_cast<double>(n) * static_cast<double>(budget) /
                                                   static_cast<double>(words));
      n = std::max<std::size_t>(1, std::min(n - 1, scaled));
    }
  }
  out.input_words = word_count(input);
  const Completion c = abstractive_summary(client, input, options.abstractive);
  out.summary = c.text;
  out.retries = c.retries;
  return out;
}

std::vector<SectionSummary> summarize_corpus(const corpus::ProcessedCorpus& corpus, const LlmClient& client,
                                             const EmbeddingProvider& provider, const SummaryOptions& options) {
  const std::size_t total = corpus.sections.size();
  std::vector<SectionSummary> out(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        out[i] = summarize_section(corpus.sections[i], client, provider, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.parallelism, total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace doclens::summarize
