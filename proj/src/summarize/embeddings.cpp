#include "doclens/summarize/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "doclens/error.hpp"
#include "doclens/summarize/llm.hpp"
#include "httplib.h"
#include "json.hpp"

namespace doclens::summarize {

std::string_view to_string(EmbeddingKind k) noexcept {
  return k == EmbeddingKind::BuiltinLexical ? "builtin_lexical" : "external_http";
}

BuiltinLexicalProvider::BuiltinLexicalProvider(const std::vector<std::vector<std::string>>& reference_docs,
                                               corpus::PreprocessOptions options)
    : vocab_(corpus::Vocabulary::build(reference_docs, 1, 1.0)), options_(std::move(options)) {
  const double n = static_cast<double>(reference_docs.size());
  idf_.resize(vocab_.size());
  for (std::size_t v = 0; v < vocab_.size(); ++v) {
    idf_[v] = std::log((1.0 + n) / (1.0 + static_cast<double>(vocab_.doc_freq(v)))) + 1.0;
  }
}

std::vector<Embedding> BuiltinLexicalProvider::embed(const std::vector<std::string>& sentences) const {
  std::vector<Embedding> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    Embedding e(vocab_.size(), 0.0);
    for (const auto& tok : corpus::preprocess(s, options_)) {
      if (const auto id = vocab_.id_of(tok)) e[*id] += idf_[*id];
    }
    double norm = 0.0;
    for (double x : e) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : e) x /= norm;
    }
    out.push_back(std::move(e));
  }
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config) : config_(std::move(config)) {
  split_url(config_.endpoint);
  if (config_.batch_size == 0) throw Error(ErrorCode::InvalidConfig, "embedding batch_size must be positive");
}

std::size_t HttpEmbeddingProvider::dimension() const {
  if (config_.dimension) return *config_.dimension;
  const std::lock_guard lock(mutex_);
  if (learned_dimension_) return *learned_dimension_;
  throw Error(ErrorCode::ProviderUnavailable, "embedding dimension unknown before the first request");
}

std::vector<Embedding> HttpEmbeddingProvider::embed(const std::vector<std::string>& sentences) const {
  const UrlParts url = split_url(config_.endpoint);
  httplib::Client client(url.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::optional<std::size_t> dim = config_.dimension;
  if (!dim) {
    const std::lock_guard lock(mutex_);
    dim = learned_dimension_;
  }
  std::vector<Embedding> out;
  for (std::size_t start = 0; start < sentences.size(); start += config_.batch_size) {
    const std::size_t stop = std::min(sentences.size(), start + config_.batch_size);
    nlohmann::json body{{"model", config_.model},
                        {"input", std::vector<std::string>(sentences.begin() + static_cast<std::ptrdiff_t>(start),
                                                           sentences.begin() + static_cast<std::ptrdiff_t>(stop))}};
    const auto res = client.Post(url.path_prefix + "/embeddings", headers, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::ProviderUnavailable, "embedding request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::ProviderUnavailable, "HTTP " + std::to_string(res->status) + " from embedding endpoint");
    }
    std::vector<Embedding> batch(stop - start);
    try {
      const auto reply = nlohmann::json::parse(res->body);
      const auto& data = reply.at("data");
      if (data.size() != batch.size()) {
        throw Error(ErrorCode::DimensionMismatch, "embedding endpoint returned " + std::to_string(data.size()) +
                                                      " vectors for " + std::to_string(batch.size()) + " inputs");
      }
      for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t index = data[i].contains("index") ? data[i]["index"].get<std::size_t>() : i;
        if (index >= batch.size()) throw Error(ErrorCode::DimensionMismatch, "embedding index out of range");
        batch[index] = data[i].at("embedding").get<Embedding>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ProviderUnavailable, std::string("malformed embedding response: ") + e.what());
    }
    for (auto& v : batch) {
      if (!dim) dim = v.size();
      if (v.size() != *dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "embedding of length " + std::to_string(v.size()) + ", expected " + std::to_string(*dim));
      }
      if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
        throw Error(ErrorCode::DimensionMismatch, "embedding contains a non-finite value");
      }
      out.push_back(std::move(v));
    }
  }
  if (dim) {
    const std::lock_guard lock(mutex_);
    learned_dimension_ = dim;
  }
  return out;
}

}  // namespace doclens::summarize
