#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doclens/service/bundle.hpp"

namespace doclens::service {

/// Initial view state offered to clients through /api/meta.
struct UiDefaults {
  /// Empty picks the first section of the bundle.
  std::string section;
  analysis::MappingMethod mapping = analysis::MappingMethod::TSNE;
  analysis::ClusterAlgorithm cluster_algorithm = analysis::ClusterAlgorithm::Hierarchical;
  /// 0 picks the first precomputed variant.
  std::size_t k = 0;
  double lambda = 0.6;
};

struct AppConfig {
  std::filesystem::path bundle;
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Allowed Origin values; "*" allows any.
  std::vector<std::string> cors_origins;
  /// Served at "/" when set (the built web UI).
  std::optional<std::filesystem::path> static_dir;
  UiDefaults ui;
};

/// Reads the run-app config. Relative paths resolve against the file's
/// directory. Throws MissingFile naming the path, SchemaViolation for
/// malformed JSON and InvalidConfig naming a bad field.
AppConfig load_app_config(const std::filesystem::path& path);
AppConfig app_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json to_json(const AppConfig& config);

using Query = std::multimap<std::string, std::string>;

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Read-only JSON API over a loaded bundle. Every response is a function of
/// the bundle and the request alone; errors are {"error": {...}} bodies
/// with status 404 (unknown id or route) or 400 (malformed parameter),
/// naming the id or parameter.
class Api {
 public:
  /// Throws InvalidConfig when the defaults name something the bundle lacks.
  Api(AnalysisBundle bundle, UiDefaults defaults = {});

  ApiResponse handle(std::string_view path, const Query& query = {}) const;

  const AnalysisBundle& bundle() const noexcept { return bundle_; }

 private:
  AnalysisBundle bundle_;
  UiDefaults defaults_;
};

/// HTTP front end: GET /api/... through Api, CORS headers per config,
/// optional static files. Construct, bind(), then run() (blocking) or
/// start() (background thread); stop() ends either.
class ApiServer {
 public:
  ApiServer(std::shared_ptr<const Api> api, AppConfig config);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds host:port (port 0 picks a free one) and returns the port.
  /// Throws IoError when the address cannot be bound.
  int bind();
  void run();
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Loads config.bundle and serves it until the process is stopped.
void serve(const AppConfig& config);

}  // namespace doclens::service
