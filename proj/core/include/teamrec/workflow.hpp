#pragma once

// Confirmation workflow for a proposed team.
//
//   proposed --notify--> notified --accept (last participant)--> confirmed
//                                 --decline--> declined
//   proposed | notified --expire--> expired
//
// confirmed, declined and expired are terminal. Participants are the lead
// and every member; all must accept for the team to be confirmed.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/common.hpp"
#include "teamrec/records.hpp"
#include "teamrec/teaming.hpp"

namespace teamrec {

enum class TeamState { proposed, notified, confirmed, declined, expired };

std::string_view to_string(TeamState state);
std::optional<TeamState> parse_team_state(std::string_view text);
bool is_terminal(TeamState state) noexcept;

enum class Response { accepted, declined };

std::string_view to_string(Response response);
std::optional<Response> parse_response(std::string_view text);

enum class EventKind { notify, accept, decline, expire };

std::string_view to_string(EventKind kind);

struct WorkflowEvent {
  EventKind kind = EventKind::notify;
  std::string user_id;  // accept and decline only

  static WorkflowEvent notify() { return {EventKind::notify, {}}; }
  static WorkflowEvent accept(std::string user) { return {EventKind::accept, std::move(user)}; }
  static WorkflowEvent decline(std::string user) { return {EventKind::decline, std::move(user)}; }
  static WorkflowEvent expire() { return {EventKind::expire, {}}; }
};

struct WorkflowState {
  std::string team_id;
  TeamState state = TeamState::proposed;
  std::vector<std::string> participants;  // lead first
  std::map<std::string, Response> responses;
  std::optional<Date> expires_after;  // the call's last deadline
  std::int64_t version = 0;

  friend bool operator==(const WorkflowState&, const WorkflowState&) = default;
};

enum class WorkflowError { illegal_transition, terminal_state, not_member, duplicate_response };

std::string_view to_string(WorkflowError error);
// 403 for not_member, 409 otherwise.
int http_status(WorkflowError error) noexcept;

struct TransitionResult {
  std::optional<WorkflowState> next;
  std::optional<WorkflowError> error;
  std::string message;

  bool ok() const noexcept { return next.has_value(); }
};

WorkflowState start_workflow(const TeamRecommendation& team, const CallRecord* call);

// Total over every (state, event) pair. A successful transition bumps
// version by one.
TransitionResult apply_event(const WorkflowState& state, const WorkflowEvent& event);

// `state` with the expire event applied when `today` is past expires_after
// and the state is not terminal. Does not bump the version.
WorkflowState effective_state(const WorkflowState& state, Date today);

}  // namespace teamrec
