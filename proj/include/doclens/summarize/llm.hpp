#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace doclens::summarize {

enum class LlmTask { Label, Summarize };

struct ChatRequest {
  LlmTask task = LlmTask::Summarize;
  /// The single user message sent over the wire.
  std::string message;
  /// Summarize: the text being summarized (used by the offline stub).
  std::string source_text;
  /// Label: the topic's top words (used by the offline stub).
  std::vector<std::string> words;
};

struct Completion {
  std::string text;
  int retries = 0;
};

/// Exponential backoff: delay before retry r (0-based) is base * factor^r.
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
};

/// Raised by an attempt that may succeed when retried (connection failure,
/// timeout, 429, 5xx).
class TransientLlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Chat-completion client. complete() runs attempt() under the retry policy
/// and throws LlmUnavailable once retries are exhausted. Implementations
/// must never log or echo credentials.
class LlmClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  virtual ~LlmClient() = default;

  Completion complete(const ChatRequest& request) const;

  /// Replaces the wait between retries (tests use a recording no-op).
  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }
  const RetryPolicy& retry_policy() const noexcept { return policy_; }

  virtual bool offline() const noexcept = 0;

 protected:
  explicit LlmClient(RetryPolicy policy);
  virtual std::string attempt(const ChatRequest& request) const = 0;

 private:
  RetryPolicy policy_;
  Sleeper sleeper_;
};

/// Deterministic offline double. Labels are "w1/w2" from the request's top
/// words; summaries are the first three sentences of the source text.
class StubLlmClient final : public LlmClient {
 public:
  struct Options {
    /// Number of initial attempts that fail transiently.
    int fail_first = 0;
    /// When set, every summarize call is checked against this word budget
    /// and a violation is recorded.
    std::optional<std::size_t> word_budget;
  };

  struct CallRecord {
    LlmTask task;
    std::size_t source_words;
    std::string message;
  };

  StubLlmClient();
  explicit StubLlmClient(Options options, RetryPolicy policy = {});

  bool offline() const noexcept override { return true; }

  std::vector<CallRecord> calls() const;
  std::size_t attempts() const;
  std::size_t budget_violations() const;
  std::size_t max_source_words() const;

 protected:
  std::string attempt(const ChatRequest& request) const override;

 private:
  Options options_;
  mutable std::mutex mutex_;
  mutable std::size_t attempts_ = 0;
  mutable std::size_t violations_ = 0;
  mutable std::vector<CallRecord> calls_;
};

struct HttpLlmConfig {
  /// Base URL of an OpenAI-compatible API, e.g. "https://api.openai.com/v1".
  std::string endpoint = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  /// Name of the environment variable holding the API key.
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  std::chrono::seconds timeout{60};
};

/// POSTs {model, temperature, messages:[{role:"user", content}]} to
/// <endpoint>/chat/completions and returns choices[0].message.content.
class HttpLlmClient final : public LlmClient {
 public:
  explicit HttpLlmClient(HttpLlmConfig config, RetryPolicy policy = {});

  bool offline() const noexcept override { return false; }
  const HttpLlmConfig& config() const noexcept { return config_; }

 protected:
  std::string attempt(const ChatRequest& request) const override;

 private:
  HttpLlmConfig config_;
};

/// Splits "scheme://host[:port]/prefix" into the origin and the path prefix
/// (without trailing slash). Throws InvalidConfig on a malformed URL.
struct UrlParts {
  std::string origin;
  std::string path_prefix;
};
UrlParts split_url(const std::string& url);

}  // namespace doclens::summarize
