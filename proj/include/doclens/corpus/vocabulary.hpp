#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "doclens/matrix.hpp"

namespace doclens::corpus {

/// Dense token <-> id mapping. Ids follow lexicographic token order.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Keeps tokens whose document frequency df satisfies df >= min_df and
  /// df / D <= max_df, where each inner vector is one document.
  /// Throws InvalidConfig on bad bounds, EmptyVocabulary if nothing survives.
  static Vocabulary build(const std::vector<std::vector<std::string>>& documents,
                          std::size_t min_df, double max_df);

  /// Rebuilds from persisted parallel arrays; tokens must be sorted and unique.
  static Vocabulary from_parts(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::optional<std::size_t> id_of(const std::string& token) const;
  const std::string& token_of(std::size_t id) const { return tokens_.at(id); }
  std::size_t doc_freq(std::size_t id) const { return doc_freq_.at(id); }

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::size_t>& doc_freqs() const noexcept { return doc_freq_; }

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && doc_freq_ == other.doc_freq_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> doc_freq_;
  std::map<std::string, std::size_t> ids_;
};

struct BowEntry {
  std::size_t token_id = 0;
  std::size_t count = 0;

  bool operator==(const BowEntry&) const = default;
};

/// Sparse row sorted by token id; stored counts are strictly positive.
using BowRow = std::vector<BowEntry>;

BowRow to_bow(const std::vector<std::string>& tokens, const Vocabulary& vocab);

/// Document-term counts for one section across the documents that have it.
struct BowMatrix {
  std::vector<std::string> row_ids;
  std::vector<BowRow> rows;
  std::size_t vocab_size = 0;

  std::size_t num_rows() const noexcept { return rows.size(); }
  std::size_t row_length(std::size_t r) const;
  std::size_t total_tokens() const;
  /// Number of distinct columns with a non-zero count.
  std::size_t distinct_tokens() const;
  Matrix dense() const;

  bool operator==(const BowMatrix&) const = default;
};

/// TF-IDF weighting with smoothed idf = ln((1 + D) / (1 + df)) + 1, where df
/// counts rows containing the token.
Matrix tfidf(const BowMatrix& bow);

}  // namespace doclens::corpus
