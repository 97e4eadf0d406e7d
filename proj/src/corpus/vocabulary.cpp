#include "doclens/corpus/vocabulary.hpp"

#include <cmath>
#include <set>

#include "doclens/error.hpp"

namespace doclens::corpus {

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& documents,
                             std::size_t min_df, double max_df) {
  if (min_df < 1) throw Error(ErrorCode::InvalidConfig, "min_df must be >= 1");
  if (!(max_df > 0.0 && max_df <= 1.0)) throw Error(ErrorCode::InvalidConfig, "max_df must be in (0, 1]");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    const std::set<std::string> unique(doc.begin(), doc.end());
    for (const auto& t : unique) ++df[t];
  }
  const double n_docs = static_cast<double>(documents.size());
  std::vector<std::string> tokens;
  std::vector<std::size_t> freqs;
  for (const auto& [token, count] : df) {  // std::map iterates lexicographically
    if (count < min_df) continue;
    if (static_cast<double>(count) / n_docs > max_df) continue;
    tokens.push_back(token);
    freqs.push_back(count);
  }
  if (tokens.empty()) {
    throw Error(ErrorCode::EmptyVocabulary, "no token satisfies min_df=" + std::to_string(min_df) +
                                                " and max_df=" + std::to_string(max_df));
  }
  return from_parts(std::move(tokens), std::move(freqs));
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> tokens, std::vector<std::size_t> doc_freq) {
  if (tokens.size() != doc_freq.size()) {
    throw Error(ErrorCode::SchemaViolation, "vocabulary tokens and doc_freq lengths differ");
  }
  Vocabulary v;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !(tokens[i - 1] < tokens[i])) {
      throw Error(ErrorCode::SchemaViolation, "vocabulary tokens not sorted/unique at index " + std::to_string(i));
    }
    v.ids_.emplace(tokens[i], i);
  }
  v.tokens_ = std::move(tokens);
  v.doc_freq_ = std::move(doc_freq);
  return v;
}

std::optional<std::size_t> Vocabulary::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

BowRow to_bow(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& t : tokens) {
    if (auto id = vocab.id_of(t)) ++counts[*id];
  }
  BowRow row;
  row.reserve(counts.size());
  for (const auto& [id, c] : counts) row.push_back({id, c});
  return row;
}

std::size_t BowMatrix::row_length(std::size_t r) const {
  std::size_t n = 0;
  for (const auto& e : rows.at(r)) n += e.count;
  return n;
}

std::size_t BowMatrix::total_tokens() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) n += row_length(r);
  return n;
}

std::size_t BowMatrix::distinct_tokens() const {
  std::set<std::size_t> ids;
  for (const auto& row : rows) {
    for (const auto& e : row) ids.insert(e.token_id);
  }
  return ids.size();
}

Matrix BowMatrix::dense() const {
  Matrix m(rows.size(), vocab_size);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& e : rows[r]) m(r, e.token_id) = static_cast<double>(e.count);
  }
  return m;
}

Matrix tfidf(const BowMatrix& bow) {
  std::vector<std::size_t> df(bow.vocab_size, 0);
  for (const auto& row : bow.rows) {
    for (const auto& e : row) ++df[e.token_id];
  }
  const double n = static_cast<double>(bow.rows.size());
  Matrix m(bow.rows.size(), bow.vocab_size);
  for (std::size_t r = 0; r < bow.rows.size(); ++r) {
    for (const auto& e : bow.rows[r]) {
      const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(df[e.token_id]))) + 1.0;
      m(r, e.token_id) = static_cast<double>(e.count) * idf;
    }
  }
  return m;
}

}  // namespace doclens::corpus
