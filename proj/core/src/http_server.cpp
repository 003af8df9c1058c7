#include <algorithm>
#include <cctype>
#include <thread>

#include <httplib.h>

#include "teamrec/service.hpp"

namespace teamrec {

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}

  Service& service;
  httplib::Server server;
  std::thread thread;
  bool bound = false;
};

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    for (const auto& [key, value] : req.headers) request.headers.emplace(lowercase(key), value);
    request.body = req.body;
    const ApiResponse response = impl_->service.handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
  impl_->server.Patch(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound_port = port;
  if (port == 0) {
    bound_port = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound_port = -1;
  }
  if (bound_port < 0) throw Error(ErrorCode::io_error, "cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound_port;
}

void HttpServer::listen() {
  if (!impl_->bound) throw Error(ErrorCode::io_error, "bind before listen");
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  if (!impl_->bound) throw Error(ErrorCode::io_error, "bind before start");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace teamrec
