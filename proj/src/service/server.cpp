#include <algorithm>
#include <iostream>
#include <thread>

#include "doclens/error.hpp"
#include "doclens/service/api.hpp"
#include "httplib.h"

namespace doclens::service {

struct ApiServer::Impl {
  std::shared_ptr<const Api> api;
  AppConfig config;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  bool origin_allowed(const std::string& origin) const {
    const auto& allowed = config.cors_origins;
    return std::find(allowed.begin(), allowed.end(), "*") != allowed.end() ||
           std::find(allowed.begin(), allowed.end(), origin) != allowed.end();
  }

  void add_cors(const httplib::Request& req, httplib::Response& res) const {
    if (config.cors_origins.empty() || !req.has_header("Origin")) return;
    const auto origin = req.get_header_value("Origin");
    if (!origin_allowed(origin)) return;
    const bool any = std::find(config.cors_origins.begin(), config.cors_origins.end(), "*") != config.cors_origins.end();
    res.set_header("Access-Control-Allow-Origin", any ? "*" : origin);
    if (!any) res.set_header("Vary", "Origin");
  }
};

ApiServer::ApiServer(std::shared_ptr<const Api> api, AppConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->api = std::move(api);
  impl_->config = std::move(config);
  auto* impl = impl_.get();
  impl->server.Get(R"(/api/.*)", [impl](const httplib::Request& req, httplib::Response& res) {
    Query q(req.params.begin(), req.params.end());
    const auto out = impl->api->handle(req.path, q);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  });
  impl->server.Options(R"(/api/.*)", [impl](const httplib::Request& req, httplib::Response& res) {
    res.status = 204;
    if (req.has_header("Origin") && impl->origin_allowed(req.get_header_value("Origin"))) {
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
  });
  impl->server.set_post_routing_handler(
      [impl](const httplib::Request& req, httplib::Response& res) { impl->add_cors(req, res); });
  if (impl->config.static_dir && !impl->server.set_mount_point("/", impl->config.static_dir->string())) {
    throw Error(ErrorCode::MissingFile, "static_dir " + impl->config.static_dir->string());
  }
}

ApiServer::~ApiServer() {
  stop();
}

int ApiServer::bind() {
  const auto& c = impl_->config;
  if (c.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(c.host);
  } else {
    impl_->port = impl_->server.bind_to_port(c.host, c.port) ? c.port : -1;
  }
  if (impl_->port < 0) {
    throw Error(ErrorCode::IoError, "cannot listen on " + c.host + ":" + std::to_string(c.port));
  }
  return impl_->port;
}

void ApiServer::run() {
  impl_->server.listen_after_bind();
}

void ApiServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ApiServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void serve(const AppConfig& config) {
  if (!std::filesystem::is_directory(config.bundle)) {
    throw Error(ErrorCode::MissingFile, "bundle " + config.bundle.string());
  }
  auto api = std::make_shared<const Api>(load_bundle(config.bundle), config.ui);
  ApiServer server(api, config);
  const int port = server.bind();
  std::cerr << nlohmann::json{{"event", "listening"}, {"host", config.host}, {"port", port}}.dump() << std::endl;
  server.run();
}

}  // namespace doclens::service
