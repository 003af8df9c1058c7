#include <gtest/gtest.h>

#include "teamrec/workflow.hpp"

namespace teamrec {
namespace {

Date ymd(int y, unsigned m, unsigned d) { return *Date::from_ymd(y, m, d); }

WorkflowState fresh() {
  TeamRecommendation team;
  team.team_id = "team-1";
  team.call_id = "C";
  team.lead = "lead";
  team.members = {{"a", {}}, {"b", {}}};
  CallRecord call;
  call.call_id = "C";
  call.deadlines = {ymd(2014, 3, 1), ymd(2014, 6, 1)};
  return start_workflow(team, &call);
}

WorkflowState must(const TransitionResult& r) {
  EXPECT_TRUE(r.ok()) << r.message;
  return *r.next;
}

TEST(Workflow, StartsProposedWithAllParticipants) {
  const auto s = fresh();
  EXPECT_EQ(s.state, TeamState::proposed);
  EXPECT_EQ(s.participants, (std::vector<std::string>{"lead", "a", "b"}));
  EXPECT_EQ(s.expires_after, ymd(2014, 6, 1));
  EXPECT_EQ(s.version, 0);
}

TEST(Workflow, AllAcceptConfirms) {
  auto s = must(apply_event(fresh(), WorkflowEvent::notify()));
  EXPECT_EQ(s.state, TeamState::notified);
  s = must(apply_event(s, WorkflowEvent::accept("a")));
  s = must(apply_event(s, WorkflowEvent::accept("lead")));
  EXPECT_EQ(s.state, TeamState::notified);
  s = must(apply_event(s, WorkflowEvent::accept("b")));
  EXPECT_EQ(s.state, TeamState::confirmed);
  EXPECT_EQ(s.version, 4);
  EXPECT_EQ(s.responses.size(), 3u);
}

TEST(Workflow, DeclineIsTerminal) {
  auto s = must(apply_event(fresh(), WorkflowEvent::notify()));
  s = must(apply_event(s, WorkflowEvent::decline("b")));
  EXPECT_EQ(s.state, TeamState::declined);
  const auto again = apply_event(s, WorkflowEvent::accept("a"));
  ASSERT_FALSE(again.ok());
  EXPECT_EQ(again.error, WorkflowError::terminal_state);
  EXPECT_EQ(http_status(*again.error), 409);
}

TEST(Workflow, Errors) {
  const auto early = apply_event(fresh(), WorkflowEvent::accept("a"));
  EXPECT_EQ(early.error, WorkflowError::illegal_transition);
  auto s = must(apply_event(fresh(), WorkflowEvent::notify()));
  EXPECT_EQ(apply_event(s, WorkflowEvent::notify()).error, WorkflowError::illegal_transition);
  const auto outsider = apply_event(s, WorkflowEvent::accept("zed"));
  EXPECT_EQ(outsider.error, WorkflowError::not_member);
  EXPECT_EQ(http_status(*outsider.error), 403);
  s = must(apply_event(s, WorkflowEvent::accept("a")));
  EXPECT_EQ(apply_event(s, WorkflowEvent::accept("a")).error, WorkflowError::duplicate_response);
  EXPECT_EQ(apply_event(s, WorkflowEvent::decline("a")).error, WorkflowError::duplicate_response);
}

TEST(Workflow, ExpiryLazyAndWithoutVersionBump) {
  const auto s = must(apply_event(fresh(), WorkflowEvent::notify()));
  EXPECT_EQ(effective_state(s, ymd(2014, 6, 1)).state, TeamState::notified);
  const auto expired = effective_state(s, ymd(2014, 6, 2));
  EXPECT_EQ(expired.state, TeamState::expired);
  EXPECT_EQ(expired.version, s.version);
  EXPECT_EQ(apply_event(expired, WorkflowEvent::accept("a")).error, WorkflowError::terminal_state);
  // No deadline, no expiry.
  auto open_ended = s;
  open_ended.expires_after.reset();
  EXPECT_EQ(effective_state(open_ended, ymd(2099, 1, 1)).state, TeamState::notified);
}

TEST(Workflow, ParseAndNames) {
  EXPECT_EQ(parse_team_state("confirmed"), TeamState::confirmed);
  EXPECT_FALSE(parse_team_state("done"));
  EXPECT_EQ(parse_response("accept"), Response::accepted);
  EXPECT_EQ(parse_response("declined"), Response::declined);
  EXPECT_FALSE(parse_response("maybe"));
  EXPECT_TRUE(is_terminal(TeamState::expired));
  EXPECT_FALSE(is_terminal(TeamState::notified));
  EXPECT_EQ(to_string(WorkflowError::not_member), "not_member");
}

}  // namespace
}  // namespace teamrec
