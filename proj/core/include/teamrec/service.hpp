#pragma once

// HTTP API over a Store. Service::handle is transport-independent;
// HttpServer binds it to a socket.
//
//   GET  /proposals?agency_id=&proposal_id=
//   GET  /users/{username}
//   GET  /awards/{award_number}
//   GET  /recommendations/user/{username}?page=N     (1-based)
//   GET  /teams/{team_id}
//   POST /teams/{team_id}/notify
//   POST /teams/{team_id}/respond   {"username", "response": "accept"|"decline"}
//   POST /teams/{team_id}/explain   {"change": "add"|"remove"|"swap", "in", "out"}
//   POST /feedback                  {"username", "call_id", "rating", "period_id"?}
//   GET  /feedback/summary?threshold=7
//   GET  /config
//   POST /admin/ingest              (X-Role: admin)
//   POST /admin/reindex             (X-Role: admin)
//
// Errors are {"error": {"code": ..., "message": ...}}.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "teamrec/codec.hpp"
#include "teamrec/pipeline.hpp"
#include "teamrec/store.hpp"
#include "teamrec/teaming.hpp"

namespace teamrec {

struct ApiRequest {
  std::string method;  // "GET", "POST", ...
  std::string path;    // decoded, without query string
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

struct ServiceOptions {
  TeamingConfig config;
  std::optional<CorpusPaths> corpus;  // used by /admin/ingest
  std::function<Date()> today = [] { return Date::today(); };
  std::function<std::string()> now;  // feedback timestamps; empty leaves them blank
};

class Service {
 public:
  Service(Store& store, ServiceOptions options);

  // Never throws; failures become error responses.
  ApiResponse handle(const ApiRequest& request);

  const TeamingConfig& config() const noexcept { return options_.config; }
  Store& store() noexcept { return store_; }

 private:
  ApiResponse route(const ApiRequest& request);

  ApiResponse get_proposals(const ApiRequest& request);
  ApiResponse get_user(const std::string& username);
  ApiResponse get_award(const std::string& award_number);
  ApiResponse get_recommendations(const std::string& username, const ApiRequest& request);
  ApiResponse get_team(const std::string& team_id);
  ApiResponse notify(const std::string& team_id);
  ApiResponse respond(const std::string& team_id, const ApiRequest& request);
  ApiResponse explain(const std::string& team_id, const ApiRequest& request);
  ApiResponse post_feedback(const ApiRequest& request);
  ApiResponse feedback_summary_endpoint(const ApiRequest& request);
  ApiResponse admin_ingest(const ApiRequest& request);
  ApiResponse admin_reindex(const ApiRequest& request);

  std::optional<ResearcherProfile> profile_by_username(const std::string& username) const;
  Json team_payload(const TeamRecommendation& team) const;
  WorkflowState current_state(const std::string& team_id) const;

  Store& store_;
  ServiceOptions options_;
  std::mutex admin_mutex_;
};

// Serves a Service over HTTP/1.1.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port. Throws Error(io_error).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  // Runs listen() on a background thread.
  void start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace teamrec
