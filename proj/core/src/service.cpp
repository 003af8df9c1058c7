#include "teamrec/service.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "teamrec/evaluation.hpp"
#include "teamrec/workflow.hpp"

namespace teamrec {

namespace {

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
  return {status, Json{{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found:
    case ErrorCode::unknown_id:
    case ErrorCode::unknown_user: return 404;
    case ErrorCode::invalid_argument:
    case ErrorCode::parse_error: return 400;
    case ErrorCode::integrity_violation:
    case ErrorCode::illegal_change:
    case ErrorCode::empty_corpus:
    case ErrorCode::version_conflict: return 409;
    default: return 500;
  }
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const std::size_t start = i;
    while (i < path.size() && path[i] != '/') ++i;
    if (i > start) out.emplace_back(path.substr(start, i - start));
  }
  return out;
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

Json parse_body(const ApiRequest& request) {
  if (request.body.empty()) return Json::object();
  Json j = Json::parse(request.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::parse_error, "body must be a JSON object");
  return j;
}

std::string body_string(const Json& body, const char* key) {
  if (!body.contains(key) || !body.at(key).is_string() || body.at(key).get<std::string>().empty()) {
    throw Error(ErrorCode::parse_error, std::string("body needs a string field ") + key);
  }
  return body.at(key).get<std::string>();
}

bool is_admin(const ApiRequest& request) {
  auto it = request.headers.find("x-role");
  return it != request.headers.end() && it->second == "admin";
}

template <typename T>
std::vector<T> load_all(const Store& store, std::string_view kind) {
  std::vector<T> out;
  for (const auto& j : store.query(kind)) out.push_back(j.get<T>());
  return out;
}

}  // namespace

Service::Service(Store& store, ServiceOptions options) : store_(store), options_(std::move(options)) {
  options_.config.validate();
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const Json::exception& e) {
    return error_response(400, "parse_error", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

ApiResponse Service::route(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  auto method_not_allowed = [] { return error_response(405, "method_not_allowed", "method not allowed"); };
  const std::size_t n = parts.size();

  if (n == 1 && parts[0] == "proposals") return get ? get_proposals(request) : method_not_allowed();
  if (n == 2 && parts[0] == "users") return get ? get_user(parts[1]) : method_not_allowed();
  if (n == 2 && parts[0] == "awards") return get ? get_award(parts[1]) : method_not_allowed();
  if (n == 3 && parts[0] == "recommendations" && parts[1] == "user") {
    return get ? get_recommendations(parts[2], request) : method_not_allowed();
  }
  if (n == 2 && parts[0] == "teams") return get ? get_team(parts[1]) : method_not_allowed();
  if (n == 3 && parts[0] == "teams") {
    if (!post) return method_not_allowed();
    if (parts[2] == "notify") return notify(parts[1]);
    if (parts[2] == "respond") return respond(parts[1], request);
    if (parts[2] == "explain") return explain(parts[1], request);
  }
  if (n == 1 && parts[0] == "feedback") return post ? post_feedback(request) : method_not_allowed();
  if (n == 2 && parts[0] == "feedback" && parts[1] == "summary") {
    return get ? feedback_summary_endpoint(request) : method_not_allowed();
  }
  if (n == 1 && parts[0] == "config") return get ? ApiResponse{200, Json(options_.config)} : method_not_allowed();
  if (n == 2 && parts[0] == "admin") {
    if (!post) return method_not_allowed();
    if (parts[1] == "ingest") return admin_ingest(request);
    if (parts[1] == "reindex") return admin_reindex(request);
  }
  return error_response(404, "not_found", "no route for " + request.method + " " + request.path);
}

ApiResponse Service::get_proposals(const ApiRequest& request) {
  static const std::map<std::string, std::string> kKeys = {{"agency_id", "agency_id"}, {"proposal_id", "call_id"}};
  std::map<std::string, std::string> filter;
  for (const auto& [key, value] : request.query) {
    auto it = kKeys.find(key);
    if (it == kKeys.end()) return error_response(400, "bad_request", "unknown filter key " + key);
    filter[it->second] = value;
  }
  return {200, Json(store_.query(kinds::calls, filter))};
}

std::optional<ResearcherProfile> Service::profile_by_username(const std::string& username) const {
  const auto found = store_.query(kinds::profiles, {{"username", username}});
  if (found.empty()) return std::nullopt;
  return found.front().get<ResearcherProfile>();
}

ApiResponse Service::get_user(const std::string& username) {
  const auto found = store_.query(kinds::profiles, {{"username", username}});
  if (found.empty()) return error_response(404, "not_found", "unknown user " + username);
  return {200, found.front()};
}

ApiResponse Service::get_award(const std::string& award_number) {
  auto award = store_.get(kinds::awards, award_number);
  if (!award) return error_response(404, "not_found", "unknown award " + award_number);
  return {200, *award};
}

WorkflowState Service::current_state(const std::string& team_id) const {
  auto stored = get_as<WorkflowState>(store_, kinds::workflow, team_id);
  if (!stored) throw Error(ErrorCode::not_found, "no workflow for team " + team_id);
  return effective_state(*stored, options_.today());
}

Json Service::team_payload(const TeamRecommendation& team) const {
  auto person = [&](const std::string& user_id, const MatchScore& score) {
    Json p{{"display_name", nullptr}, {"score", score.score}, {"user_id", user_id}, {"username", nullptr}};
    if (auto profile = get_as<ResearcherProfile>(store_, kinds::profiles, user_id)) {
      p["display_name"] = profile->display_name;
      p["username"] = profile->username;
    }
    return p;
  };
  Json call = nullptr;
  if (auto c = get_as<CallRecord>(store_, kinds::calls, team.call_id)) {
    const auto next = c->next_deadline(options_.today());
    call = Json{{"agency_id", c->agency_id},
                {"budget_total", c->budget_total ? Json(*c->budget_total) : Json(nullptr)},
                {"call_id", c->call_id},
                {"deadlines", c->deadlines},
                {"next_deadline", next ? Json(*next) : Json(nullptr)},
                {"title", c->title ? Json(*c->title) : Json(nullptr)},
                {"url", c->url}};
  }
  Json members = Json::array();
  for (const auto& m : team.members) members.push_back(person(m.user_id, m.score));
  const WorkflowState state = current_state(team.team_id);
  return Json{{"call", std::move(call)},
              {"lead", person(team.lead, team.lead_score)},
              {"members", std::move(members)},
              {"per_member_allocation", team.per_member_allocation ? Json(*team.per_member_allocation) : Json(nullptr)},
              {"proposed_budget", team.proposed_budget ? Json(*team.proposed_budget) : Json(nullptr)},
              {"report", team.report},
              {"state", to_string(state.state)},
              {"team_id", team.team_id},
              {"workflow", state}};
}

ApiResponse Service::get_recommendations(const std::string& username, const ApiRequest& request) {
  int page = 1;
  if (auto it = request.query.find("page"); it != request.query.end()) {
    const auto parsed = parse_int(it->second);
    if (!parsed || *parsed < 1) return error_response(400, "bad_request", "page must be a positive integer");
    page = *parsed;
  }
  const auto profile = profile_by_username(username);
  if (!profile) return error_response(404, "not_found", "unknown user " + username);

  std::vector<std::string> team_ids;
  if (auto index = store_.get(kinds::user_index, profile->user_id)) {
    team_ids = index->at("team_ids").get<std::vector<std::string>>();
  }
  const int page_size = options_.config.page_size;
  const auto total = static_cast<int>(team_ids.size());
  Json items = Json::array();
  const std::size_t begin = static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(page_size);
  for (std::size_t i = begin; i < team_ids.size() && i < begin + static_cast<std::size_t>(page_size); ++i) {
    if (auto team = get_as<TeamRecommendation>(store_, kinds::recommendations, team_ids[i])) {
      items.push_back(team_payload(*team));
    }
  }
  Json user{{"designation", profile->designation},
            {"display_name", profile->display_name},
            {"skills", Json::array()},
            {"user_id", profile->user_id},
            {"username", profile->username}};
  for (const auto& s : profile->skills.skills()) user["skills"].push_back(s.display);
  return {200, Json{{"items", std::move(items)},
                    {"page", page},
                    {"page_size", page_size},
                    {"total", total},
                    {"total_pages", (total + page_size - 1) / page_size},
                    {"user", std::move(user)}}};
}

ApiResponse Service::get_team(const std::string& team_id) {
  auto team = get_as<TeamRecommendation>(store_, kinds::recommendations, team_id);
  if (!team) return error_response(404, "not_found", "unknown team " + team_id);
  return {200, team_payload(*team)};
}

namespace {

struct TransitionOutcome {
  std::optional<WorkflowState> state;
  std::optional<WorkflowError> error;
  std::string message;
};

// Applies `event` with lazy expiry, retrying on concurrent updates.
TransitionOutcome transition(Store& store, const std::string& team_id, const WorkflowEvent& event, Date today) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto stored = get_as<WorkflowState>(store, kinds::workflow, team_id);
    if (!stored) throw Error(ErrorCode::not_found, "no workflow for team " + team_id);
    WorkflowState base = *stored;
    bool expired_now = false;
    if (effective_state(base, today).state == TeamState::expired && !is_terminal(base.state)) {
      base = *apply_event(base, WorkflowEvent::expire()).next;
      expired_now = true;
    }
    const TransitionResult result = apply_event(base, event);
    const WorkflowState& to_write = result.ok() ? *result.next : base;
    if (result.ok() || expired_now) {
      if (!store.put_if_version(kinds::workflow, team_id, Json(to_write), stored->version)) continue;
    }
    if (!result.ok()) return {std::nullopt, result.error, result.message};
    return {*result.next, std::nullopt, {}};
  }
  throw Error(ErrorCode::version_conflict, "team " + team_id + " is being updated concurrently");
}

}  // namespace

ApiResponse Service::notify(const std::string& team_id) {
  auto team = get_as<TeamRecommendation>(store_, kinds::recommendations, team_id);
  if (!team) return error_response(404, "not_found", "unknown team " + team_id);
  const auto outcome = transition(store_, team_id, WorkflowEvent::notify(), options_.today());
  if (!outcome.state) return error_response(http_status(*outcome.error), to_string(*outcome.error), outcome.message);
  int sent = 0;
  for (const auto& user : team->participants()) {
    const std::string role = user == team->lead ? "lead" : "member";
    store_.put(kinds::outbox, team_id + "/" + user,
               Json{{"call_id", team->call_id},
                    {"kind", "notify"},
                    {"message", "You are proposed as " + role + " of team " + team_id + " for call " + team->call_id +
                                    ". Please accept or decline."},
                    {"team_id", team_id},
                    {"user_id", user}});
    ++sent;
  }
  return {200, Json{{"notifications", sent}, {"state", to_string(outcome.state->state)}, {"workflow", *outcome.state}}};
}

ApiResponse Service::respond(const std::string& team_id, const ApiRequest& request) {
  auto team = get_as<TeamRecommendation>(store_, kinds::recommendations, team_id);
  if (!team) return error_response(404, "not_found", "unknown team " + team_id);
  const Json body = parse_body(request);
  const std::string username = body_string(body, "username");
  const std::string answer = body_string(body, "response");
  const auto response = parse_response(answer);
  if (!response) return error_response(400, "bad_request", "response must be accept or decline");
  const auto profile = profile_by_username(username);
  if (!profile) return error_response(403, "not_member", username + " is not on team " + team_id);

  const auto event = *response == Response::accepted ? WorkflowEvent::accept(profile->user_id)
                                                     : WorkflowEvent::decline(profile->user_id);
  const auto outcome = transition(store_, team_id, event, options_.today());
  if (!outcome.state) return error_response(http_status(*outcome.error), to_string(*outcome.error), outcome.message);

  Json out{{"state", to_string(outcome.state->state)}, {"workflow", *outcome.state}};
  if (outcome.state->state == TeamState::declined && profile->user_id != team->lead) {
    const auto profiles = load_all<ResearcherProfile>(store_, kinds::profiles);
    const ProfileIndex index(profiles);
    std::vector<TeamChange> changes{TeamChange::remove(profile->user_id)};
    std::set<std::string> alternates;
    for (const auto& j : store_.query(kinds::recommendations, {{"call_id", team->call_id}})) {
      for (const auto& user : j.get<TeamRecommendation>().participants()) {
        if (!team->has_participant(user)) alternates.insert(user);
      }
    }
    for (const auto& user : alternates) changes.push_back(TeamChange::swap(profile->user_id, user));
    Json options = Json::array();
    for (const auto& change : changes) {
      try {
        const auto report = explain_change(*team, change, index, options_.config);
        options.push_back({{"change", {{"in", change.in}, {"kind", to_string(change.kind)}, {"out", change.out}}},
                           {"report", report}});
      } catch (const Error&) {
        // Users missing from the roster are not offered.
      }
    }
    out["repair_options"] = std::move(options);
  }
  return {200, std::move(out)};
}

ApiResponse Service::explain(const std::string& team_id, const ApiRequest& request) {
  auto team = get_as<TeamRecommendation>(store_, kinds::recommendations, team_id);
  if (!team) return error_response(404, "not_found", "unknown team " + team_id);
  const Json body = parse_body(request);
  const std::string kind = body_string(body, "change");
  TeamChange change;
  if (kind == "add") {
    change = TeamChange::add(body_string(body, "in"));
  } else if (kind == "remove") {
    change = TeamChange::remove(body_string(body, "out"));
  } else if (kind == "swap") {
    change = TeamChange::swap(body_string(body, "out"), body_string(body, "in"));
  } else {
    return error_response(400, "bad_request", "change must be add, remove or swap");
  }
  const auto profiles = load_all<ResearcherProfile>(store_, kinds::profiles);
  const auto report = explain_change(*team, change, ProfileIndex(profiles), options_.config);
  return {200, Json{{"change", {{"in", change.in}, {"kind", to_string(change.kind)}, {"out", change.out}}},
                    {"report", report},
                    {"team_id", team_id}}};
}

ApiResponse Service::post_feedback(const ApiRequest& request) {
  const Json body = parse_body(request);
  const std::string username = body_string(body, "username");
  const std::string call_id = body_string(body, "call_id");
  if (!body.contains("rating") || !body.at("rating").is_number_integer()) {
    return error_response(400, "bad_request", "rating must be an integer");
  }
  const auto rating = body.at("rating").get<std::int64_t>();
  if (rating < 1 || rating > 10) {
    return error_response(422, "invalid_rating", "rating " + std::to_string(rating) + " outside 1..10");
  }
  const auto profile = profile_by_username(username);
  if (!profile) return error_response(404, "not_found", "unknown user " + username);
  if (!store_.get(kinds::calls, call_id)) return error_response(404, "not_found", "unknown call " + call_id);

  FeedbackEvent event;
  event.user_id = profile->user_id;
  event.call_id = call_id;
  event.rating = static_cast<int>(rating);
  if (body.contains("period_id") && body.at("period_id").is_string()) event.period_id = body.at("period_id");
  if (options_.now) event.timestamp = options_.now();
  const auto seq = store_.append_event(event);
  return {201, Json{{"event", event}, {"seq", seq}}};
}

ApiResponse Service::feedback_summary_endpoint(const ApiRequest& request) {
  int threshold = 7;
  if (auto it = request.query.find("threshold"); it != request.query.end()) {
    const auto parsed = parse_int(it->second);
    if (!parsed) return error_response(400, "bad_request", "threshold must be an integer");
    threshold = *parsed;
  }
  const auto events = store_.replay_events();
  return {200, Json(feedback_summary(events, threshold))};
}

ApiResponse Service::admin_ingest(const ApiRequest& request) {
  if (!is_admin(request)) return error_response(403, "forbidden", "administrator role required");
  if (!options_.corpus) return error_response(409, "no_corpus", "no corpus paths configured");
  std::lock_guard lock(admin_mutex_);
  const PipelineOutput output = run_pipeline(*options_.corpus, options_.config, options_.today());
  const PublishSummary summary = publish(store_, output);
  return {200, Json{{"issues", output.corpus.issues},
                    {"published",
                     {{"awards", summary.awards},
                      {"calls", summary.calls},
                      {"new_workflows", summary.new_workflows},
                      {"profiles", summary.profiles},
                      {"teams", summary.teams}}},
                    {"stats", output.corpus.stats}}};
}

ApiResponse Service::admin_reindex(const ApiRequest& request) {
  if (!is_admin(request)) return error_response(403, "forbidden", "administrator role required");
  std::lock_guard lock(admin_mutex_);
  Corpus corpus;
  corpus.calls = load_all<CallRecord>(store_, kinds::calls);
  corpus.profiles = load_all<ResearcherProfile>(store_, kinds::profiles);
  corpus.awards = load_all<AwardRecord>(store_, kinds::awards);
  if (corpus.calls.empty()) return error_response(409, "empty_corpus", "no calls to index");

  std::optional<CorpusVectorModel> model;
  if (auto stored = store_.get(kinds::models, "active")) {
    auto m = model_from_json(*stored);
    if (m.source() == CorpusVectorModel::Source::imported) model = std::move(m);
  }
  if (!model) {
    std::vector<std::string> synopses;
    for (const auto& c : corpus.calls) synopses.push_back(c.synopsis);
    model = build_corpus_model(synopses);
  }
  RecommendationSet recs = run_recommendations(corpus, *model, options_.config);
  const PipelineOutput output{std::move(corpus), std::move(*model), std::move(recs)};
  const PublishSummary summary = publish(store_, output);
  return {200, Json{{"published",
                     {{"awards", summary.awards},
                      {"calls", summary.calls},
                      {"new_workflows", summary.new_workflows},
                      {"profiles", summary.profiles},
                      {"teams", summary.teams}}}}};
}

}  // namespace teamrec
