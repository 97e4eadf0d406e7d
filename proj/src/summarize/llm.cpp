#include "doclens/summarize/llm.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "doclens/error.hpp"
#include "doclens/summarize/sentences.hpp"
#include "httplib.h"
#include "json.hpp"

namespace doclens::summarize {

LlmClient::LlmClient(RetryPolicy policy)
    : policy_(policy), sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

Completion LlmClient::complete(const ChatRequest& request) const {
  Completion out;
  std::string last_error;
  for (int attempt_no = 0;; ++attempt_no) {
    try {
      out.text = attempt(request);
      out.retries = attempt_no;
      return out;
    } catch (const TransientLlmError& e) {
      last_error = e.what();
    }
    if (attempt_no >= policy_.max_retries) break;
    const double scale = std::pow(policy_.factor, attempt_no);
    sleeper_(std::chrono::milliseconds(static_cast<long long>(static_cast<double>(policy_.base_delay.count()) * scale)));
  }
  throw Error(ErrorCode::LlmUnavailable,
              "gave up after " + std::to_string(policy_.max_retries) + " retries: " + last_error);
}

StubLlmClient::StubLlmClient() : StubLlmClient(Options{}) {}

StubLlmClient::StubLlmClient(Options options, RetryPolicy policy) : LlmClient(policy), options_(options) {}

std::string StubLlmClient::attempt(const ChatRequest& request) const {
  std::lock_guard lock(mutex_);
  ++attempts_;
  if (attempts_ <= static_cast<std::size_t>(options_.fail_first)) {
    throw TransientLlmError("stub failure " + std::to_string(attempts_));
  }
  const std::size_t words = word_count(request.source_text);
  calls_.push_back({request.task, words, request.message});
  if (request.task == LlmTask::Label) {
    std::string label;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, request.words.size()); ++i) {
      if (i > 0) label += '/';
      label += request.words[i];
    }
    return label;
  }
  if (options_.word_budget && words > *options_.word_budget) ++violations_;
  return first_sentences(request.source_text, 3);
}

std::vector<StubLlmClient::CallRecord> StubLlmClient::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::size_t StubLlmClient::attempts() const {
  std::lock_guard lock(mutex_);
  return attempts_;
}

std::size_t StubLlmClient::budget_violations() const {
  std::lock_guard lock(mutex_);
  return violations_;
}

std::size_t StubLlmClient::max_source_words() const {
  std::lock_guard lock(mutex_);
  std::size_t m = 0;
  for (const auto& c : calls_) {
    if (c.task == LlmTask::Summarize) m = std::max(m, c.source_words);
  }
  return m;
}

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidConfig, "endpoint '" + url + "' lacks a scheme");
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::InvalidConfig, "endpoint scheme must be http or https");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  UrlParts parts;
  parts.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) parts.path_prefix = url.substr(path_start);
  while (!parts.path_prefix.empty() && parts.path_prefix.back() == '/') parts.path_prefix.pop_back();
  if (parts.origin.size() <= scheme_end + 3) throw Error(ErrorCode::InvalidConfig, "endpoint '" + url + "' lacks a host");
  return parts;
}

HttpLlmClient::HttpLlmClient(HttpLlmConfig config, RetryPolicy policy)
    : LlmClient(policy), config_(std::move(config)) {
  split_url(config_.endpoint);
}

std::string HttpLlmClient::attempt(const ChatRequest& request) const {
  const UrlParts url = split_url(config_.endpoint);
  httplib::Client client(url.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  nlohmann::json body{
      {"model", config_.model},
      {"temperature", config_.temperature},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.message}}})},
  };
  const auto res = client.Post(url.path_prefix + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) throw TransientLlmError("request failed: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500) {
    throw TransientLlmError("HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::LlmUnavailable, "HTTP " + std::to_string(res->status) + " from chat endpoint");
  }
  try {
    const auto reply = nlohmann::json::parse(res->body);
    std::string text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto last = text.find_last_not_of(" \t\r\n");
    return first == std::string::npos ? std::string() : text.substr(first, last - first + 1);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::LlmUnavailable, std::string("malformed chat completion: ") + e.what());
  }
}

}  // namespace doclens::summarize
