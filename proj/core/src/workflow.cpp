#include "teamrec/workflow.hpp"

#include <algorithm>
#include <array>

namespace teamrec {

namespace {

constexpr std::array<std::string_view, 5> kStateNames = {"proposed", "notified", "confirmed", "declined",
                                                         "expired"};

TransitionResult fail(WorkflowError error, std::string message) {
  return {std::nullopt, error, std::move(message)};
}

TransitionResult advance(WorkflowState next) {
  ++next.version;
  return {std::move(next), std::nullopt, {}};
}

}  // namespace

std::string_view to_string(TeamState state) { return kStateNames[static_cast<std::size_t>(state)]; }

std::optional<TeamState> parse_team_state(std::string_view text) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == text) return static_cast<TeamState>(i);
  }
  return std::nullopt;
}

bool is_terminal(TeamState state) noexcept {
  return state == TeamState::confirmed || state == TeamState::declined || state == TeamState::expired;
}

std::string_view to_string(Response response) {
  return response == Response::accepted ? "accepted" : "declined";
}

std::optional<Response> parse_response(std::string_view text) {
  if (text == "accept" || text == "accepted") return Response::accepted;
  if (text == "decline" || text == "declined") return Response::declined;
  return std::nullopt;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::notify: return "notify";
    case EventKind::accept: return "accept";
    case EventKind::decline: return "decline";
    case EventKind::expire: return "expire";
  }
  return "unknown";
}

std::string_view to_string(WorkflowError error) {
  switch (error) {
    case WorkflowError::illegal_transition: return "illegal_transition";
    case WorkflowError::terminal_state: return "terminal_state";
    case WorkflowError::not_member: return "not_member";
    case WorkflowError::duplicate_response: return "duplicate_response";
  }
  return "unknown";
}

int http_status(WorkflowError error) noexcept { return error == WorkflowError::not_member ? 403 : 409; }

WorkflowState start_workflow(const TeamRecommendation& team, const CallRecord* call) {
  WorkflowState state;
  state.team_id = team.team_id;
  state.participants = team.participants();
  if (call) state.expires_after = call->last_deadline();
  return state;
}

TransitionResult apply_event(const WorkflowState& state, const WorkflowEvent& event) {
  const std::string kind(to_string(event.kind));
  if (is_terminal(state.state)) {
    return fail(WorkflowError::terminal_state,
                "team is " + std::string(to_string(state.state)) + "; " + kind + " not allowed");
  }
  WorkflowState next = state;
  switch (event.kind) {
    case EventKind::expire:
      next.state = TeamState::expired;
      return advance(std::move(next));
    case EventKind::notify:
      if (state.state != TeamState::proposed) {
        return fail(WorkflowError::illegal_transition, "team was already notified");
      }
      next.state = TeamState::notified;
      return advance(std::move(next));
    case EventKind::accept:
    case EventKind::decline: {
      if (state.state != TeamState::notified) {
        return fail(WorkflowError::illegal_transition, "team has not been notified; " + kind + " not allowed");
      }
      const auto& p = state.participants;
      if (std::find(p.begin(), p.end(), event.user_id) == p.end()) {
        return fail(WorkflowError::not_member, event.user_id + " is not on team " + state.team_id);
      }
      if (state.responses.contains(event.user_id)) {
        return fail(WorkflowError::duplicate_response, event.user_id + " already responded");
      }
      if (event.kind == EventKind::decline) {
        next.responses[event.user_id] = Response::declined;
        next.state = TeamState::declined;
      } else {
        next.responses[event.user_id] = Response::accepted;
        if (next.responses.size() == p.size()) next.state = TeamState::confirmed;
      }
      return advance(std::move(next));
    }
  }
  return fail(WorkflowError::illegal_transition, "unknown event");
}

WorkflowState effective_state(const WorkflowState& state, Date today) {
  if (is_terminal(state.state) || !state.expires_after || !(*state.expires_after < today)) return state;
  WorkflowState out = state;
  out.state = TeamState::expired;
  return out;
}

}  // namespace teamrec
