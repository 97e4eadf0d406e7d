#pragma once

#include <chrono>
#include <mutex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/corpus/preprocess.hpp"
#include "doclens/corpus/vocabulary.hpp"

namespace doclens::summarize {

enum class EmbeddingKind { BuiltinLexical, ExternalHttp };

std::string_view to_string(EmbeddingKind k) noexcept;

using Embedding = std::vector<double>;

/// Maps sentences to fixed-dimension finite vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbeddingKind kind() const noexcept = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<Embedding> embed(const std::vector<std::string>& sentences) const = 0;
};

/// L2-normalized TF-IDF over a fixed vocabulary. Sentences are tokenized
/// with the corpus preprocessing; idf is ln((1 + D) / (1 + df)) + 1 over the
/// reference documents. A sentence without known tokens maps to zeros.
class BuiltinLexicalProvider final : public EmbeddingProvider {
 public:
  BuiltinLexicalProvider(const std::vector<std::vector<std::string>>& reference_docs,
                         corpus::PreprocessOptions options);

  EmbeddingKind kind() const noexcept override { return EmbeddingKind::BuiltinLexical; }
  std::size_t dimension() const override { return vocab_.size(); }
  std::vector<Embedding> embed(const std::vector<std::string>& sentences) const override;

 private:
  corpus::Vocabulary vocab_;
  std::vector<double> idf_;
  corpus::PreprocessOptions options_;
};

struct HttpEmbeddingConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "text-embedding-3-small";
  std::string api_key_env = "OPENAI_API_KEY";
  /// Expected vector length; learned from the first response when unset.
  std::optional<std::size_t> dimension;
  std::size_t batch_size = 64;
  std::chrono::seconds timeout{60};
};

/// POSTs {model, input: [...]} to <endpoint>/embeddings in batches and
/// reads data[i].embedding ordered by data[i].index. Throws
/// ProviderUnavailable on transport or HTTP failure and DimensionMismatch
/// when a vector has the wrong length or the count differs.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEmbeddingConfig config);

  EmbeddingKind kind() const noexcept override { return EmbeddingKind::ExternalHttp; }
  std::size_t dimension() const override;
  std::vector<Embedding> embed(const std::vector<std::string>& sentences) const override;

 private:
  HttpEmbeddingConfig config_;
  mutable std::mutex mutex_;
  mutable std::optional<std::size_t> learned_dimension_;
};

}  // namespace doclens::summarize
