#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/corpus/corpus.hpp"
#include "doclens/summarize/embeddings.hpp"
#include "doclens/summarize/llm.hpp"
#include "doclens/summarize/sentences.hpp"

namespace doclens::summarize {

inline constexpr std::string_view kDefaultPrompt = "Summarize the text above in three sentences";
inline constexpr std::string_view kTldrPrompt = "tl;dr";
inline constexpr std::string_view kPlainPrompt = "summarize the text above";

/// Rough token estimate for a word count (1.3 tokens per word).
std::size_t estimated_tokens(std::size_t words);

/// Indices (ascending) of n representative sentences: k-means with k = n
/// over the vectors, then for each centroid the nearest sentence. A sentence
/// chosen twice is kept once and the later centroid takes its next-nearest
/// unused sentence, so exactly n indices come back.
/// Throws BadN unless 1 <= n <= vectors.size().
std::vector<std::size_t> extractive_select(const std::vector<Embedding>& vectors, std::size_t n,
                                           std::uint64_t seed = 0);

struct AbstractiveOptions {
  std::string prompt = std::string(kDefaultPrompt);
  std::size_t word_budget = 3000;
};

/// Sends "<text>\n\n<prompt>" and returns the trimmed completion. Throws
/// InputTooLarge when the text exceeds the word budget.
Completion abstractive_summary(const LlmClient& client, std::string_view text, const AbstractiveOptions& options = {});

enum class SummaryPath { Direct, Extractive };

std::string_view to_string(SummaryPath p) noexcept;
SummaryPath summary_path_from_string(std::string_view s);

struct SummaryOptions {
  AbstractiveOptions abstractive;
  /// Upper bound on kept sentences when reducing: max(min_sentences,
  /// ceil(ratio * count)).
  double extractive_ratio = 0.2;
  std::size_t min_sentences = 3;
  std::uint64_t seed = 0;
  /// Sections summarized concurrently by summarize_corpus.
  std::size_t parallelism = 2;
};

struct SectionSummary {
  std::string doc_id;
  std::string section_id;
  SummaryPath path = SummaryPath::Direct;
  std::string summary;
  /// Sentences of the section body; selected indices refer to these.
  std::vector<std::string> sentences;
  std::vector<std::size_t> selected;
  /// Words sent to the model.
  std::size_t input_words = 0;
  int retries = 0;

  bool operator==(const SectionSummary&) const = default;
};

/// Text of a section without its heading line.
std::string_view section_body(const corpus::Section& section);

/// Direct abstractive call when the body fits the budget; otherwise the
/// largest n (up to the ratio bound) whose extractive selection fits, found
/// by descending search with proportional steps, then the abstractive call
/// on the selection. Throws InputTooLarge when a single sentence is over
/// budget.
SectionSummary summarize_section(const corpus::Section& section, const LlmClient& client,
                                 const EmbeddingProvider& provider, const SummaryOptions& options = {});

/// Summaries of every section in the corpus, ordered by (doc, section) as
/// in the corpus regardless of parallelism.
std::vector<SectionSummary> summarize_corpus(const corpus::ProcessedCorpus& corpus, const LlmClient& client,
                                             const EmbeddingProvider& provider, const SummaryOptions& options = {});

}  // namespace doclens::summarize
