#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace doclens::corpus {

/// Bundled English stopword list.
const std::set<std::string>& default_stopwords();

struct PreprocessOptions {
  std::set<std::string> stopwords = default_stopwords();
  std::size_t min_token_len = 3;
  bool stemming = true;
  /// Optional token -> lemma table; a hit replaces the token and skips the
  /// stemmer.
  std::map<std::string, std::string> lemmas;
};

/// Lowercases, splits on anything that is not a letter, drops stopwords and
/// short tokens, then stems. Stopwords are checked again after stemming so
/// the output never contains one.
std::vector<std::string> preprocess(std::string_view raw_text, const PreprocessOptions& options);

}  // namespace doclens::corpus
