#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace doclens::summarize {

struct Sentence {
  std::size_t index = 0;
  std::string text;  // trimmed
  std::size_t begin = 0;  // byte span in the source text
  std::size_t end = 0;

  bool operator==(const Sentence&) const = default;
};

struct SentenceSet {
  std::string doc_id;
  std::string section_id;
  std::vector<Sentence> sentences;

  std::size_t size() const noexcept { return sentences.size(); }
};

/// Splits on terminal punctuation (. ! ?) followed by whitespace or the end
/// of text, and on blank lines. A period after a known abbreviation
/// ("Dr.", "e.g.", ...) or a single-letter initial does not end a sentence.
SentenceSet split_sentences(std::string_view text);

/// Whitespace-separated word count.
std::size_t word_count(std::string_view text);

/// First n sentences joined by single spaces.
std::string first_sentences(std::string_view text, std::size_t n);

}  // namespace doclens::summarize
