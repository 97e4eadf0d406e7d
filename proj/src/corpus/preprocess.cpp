#include "doclens/corpus/preprocess.hpp"

#include "doclens/corpus/stemmer.hpp"

namespace doclens::corpus {
namespace {

bool is_letter(unsigned char ch) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 letters; keep them inside words.
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch >= 0x80;
}

char ascii_lower(char ch) {
  return (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : ch;
}

}  // namespace

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words{
      "a",          "about",   "above",   "after",    "again",   "against", "all",
      "also",       "am",      "an",      "and",      "any",     "are",     "aren",
      "as",         "at",      "be",      "because",  "been",    "before",  "being",
      "below",      "between", "both",    "but",      "by",      "can",     "could",
      "couldn",     "did",     "didn",    "do",       "does",    "doesn",   "doing",
      "don",        "down",    "during",  "each",     "etc",     "few",     "for",
      "from",       "further", "had",     "hadn",     "has",     "hasn",    "have",
      "haven",      "having",  "he",      "her",      "here",    "hers",    "herself",
      "him",        "himself", "his",     "how",      "however", "i",       "if",
      "in",         "into",    "is",      "isn",      "it",      "its",     "itself",
      "just",       "may",     "me",      "might",    "more",    "most",    "must",
      "mustn",      "my",      "myself",  "no",       "nor",     "not",     "now",
      "of",         "off",     "on",      "once",     "only",    "or",      "other",
      "our",        "ours",    "ourselves", "out",    "over",    "own",     "same",
      "shall",      "shan",    "she",     "should",   "shouldn", "so",      "some",
      "such",       "than",    "that",    "the",      "their",   "theirs",  "them",
      "themselves", "then",    "there",   "these",    "they",    "this",    "those",
      "through",    "thus",    "to",      "too",      "under",   "until",   "up",
      "upon",       "us",      "very",    "via",      "was",     "wasn",    "we",
      "were",       "weren",   "what",    "when",     "where",   "whereas", "which",
      "while",      "who",     "whom",    "whose",    "why",     "will",    "with",
      "within",     "without", "won",     "would",    "wouldn",  "yet",     "you",
      "your",       "yours",   "yourself", "yourselves"};
  return words;
}

std::vector<std::string> preprocess(std::string_view raw_text, const PreprocessOptions& options) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    std::string token = std::move(word);
    word.clear();
    if (options.stopwords.count(token) != 0) return;
    if (auto it = options.lemmas.find(token); it != options.lemmas.end()) {
      token = it->second;
    } else if (options.stemming) {
      token = porter_stem(token);
    }
    if (token.size() < options.min_token_len) return;
    if (options.stopwords.count(token) != 0) return;
    out.push_back(std::move(token));
  };
  for (char ch : raw_text) {
    if (is_letter(static_cast<unsigned char>(ch))) {
      word.push_back(ascii_lower(ch));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace doclens::corpus
