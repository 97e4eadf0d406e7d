#include "doclens/summarize/sentences.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace doclens::summarize {
namespace {

constexpr std::array<std::string_view, 32> kAbbreviations{
    "mr", "mrs", "ms",   "dr",  "prof", "sr",   "jr",  "st",   "vs",    "e.g", "i.e",
    "no", "fig", "figs", "approx", "inc", "ltd", "co", "corp", "dept",  "est", "art",
    "para", "cf", "al",  "eq",  "vol",  "pp",   "nr",  "ca",   "resp",  "incl"};

bool is_space(char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }

bool guarded(std::string_view text, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !is_space(text[start - 1])) --start;
  std::string word(text.substr(start, dot - start));
  // Strip leading brackets/quotes.
  while (!word.empty() && !std::isalnum(static_cast<unsigned char>(word.front()))) word.erase(word.begin());
  if (word.empty()) return false;
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0]))) return true;
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

void push(SentenceSet& set, std::string_view text, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  if (begin == end) return;
  Sentence s;
  s.index = set.sentences.size();
  s.text = std::string(text.substr(begin, end - begin));
  s.begin = begin;
  s.end = end;
  set.sentences.push_back(std::move(s));
}

}  // namespace

SentenceSet split_sentences(std::string_view text) {
  SentenceSet set;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '\n') {
      // Blank line: paragraph boundary.
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '\n' && is_space(text[j])) ++j;
      if (j < text.size() && text[j] == '\n') {
        push(set, text, start, i);
        start = j + 1;
        i = j + 1;
        continue;
      }
    }
    if (ch == '.' || ch == '!' || ch == '?') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
      while (j < text.size() && (text[j] == '"' || text[j] == '\'' || text[j] == ')' || text[j] == ']')) ++j;
      const bool at_break = j == text.size() || is_space(text[j]);
      if (at_break && !(ch == '.' && j == i + 1 && guarded(text, i))) {
        push(set, text, start, j);
        start = j;
      }
      i = j;
      continue;
    }
    ++i;
  }
  push(set, text, start, text.size());
  return set;
}

std::size_t word_count(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char ch : text) {
    if (is_space(ch)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::string first_sentences(std::string_view text, std::size_t n) {
  const auto set = split_sentences(text);
  std::string out;
  for (std::size_t i = 0; i < std::min(n, set.size()); ++i) {
    if (!out.empty()) out += ' ';
    out += set.sentences[i].text;
  }
  return out;
}

}  // namespace doclens::summarize
