#pragma once

// Greedy team formation under three hard constraints:
//
//   size_cap      the team is no larger than the configured cap (5 by
//                 default); with allow_large_teams a budget that funds more
//                 than team_cap participants raises the cap up to
//                 hard_ceiling.
//   budget_floor  budget / |team| >= per_participant_floor. Satisfied with a
//                 note when the call budget is unknown.
//   unique_skill  every member owns at least one canonical skill that no
//                 other member has.
//
// build_team sorts candidates by (score desc, user_id asc) and, starting
// from the lead, adds each candidate whose addition keeps all three
// constraints satisfied, stopping at team_size_cap(budget).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/matching.hpp"
#include "teamrec/records.hpp"

namespace teamrec {

struct TeamingConfig {
  int k = 10;
  int team_cap = 5;
  Money per_participant_floor{50'000};
  bool allow_large_teams = false;
  int hard_ceiling = 10;
  int relevance_floor = 40;
  int page_size = 3;
  std::optional<int> max_recs_per_user_per_period;
  MatchStrategy strategy = MatchStrategy::vector;

  // Throws Error(invalid_argument) naming the first broken invariant.
  void validate() const;

  friend bool operator==(const TeamingConfig&, const TeamingConfig&) = default;
};

enum class ConstraintId { size_cap, budget_floor, unique_skill };

std::string_view to_string(ConstraintId id);

struct ConstraintCheck {
  ConstraintId id = ConstraintId::size_cap;
  bool satisfied = false;
  std::string explanation;

  friend bool operator==(const ConstraintCheck&, const ConstraintCheck&) = default;
};

// Always holds the three constraints in ConstraintId order.
struct ConstraintReport {
  std::array<ConstraintCheck, 3> checks{};

  bool all_satisfied() const noexcept;
  const ConstraintCheck& get(ConstraintId id) const { return checks[static_cast<std::size_t>(id)]; }

  friend bool operator==(const ConstraintReport&, const ConstraintReport&) = default;
};

// min(team_cap, floor(budget / floor)), or up to hard_ceiling when
// allow_large_teams and the budget funds more than team_cap participants.
// team_cap when the budget is unknown.
int team_size_cap(std::optional<Money> budget, const TeamingConfig& config);

// The bound checked by the size_cap constraint: team_cap, raised (never
// lowered) by the budget when allow_large_teams. The budget-driven lower
// bound is the budget_floor constraint's job.
int size_cap_limit(std::optional<Money> budget, const TeamingConfig& config);

// `team` lists every member's SkillSet, lead included. Must be non-empty.
ConstraintReport check_constraints(std::span<const SkillSet* const> team, std::optional<Money> budget,
                                   const TeamingConfig& config);

std::optional<Money> allocate_budget(int team_size, std::optional<Money> budget);

struct TeamMember {
  std::string user_id;
  MatchScore score;

  friend bool operator==(const TeamMember&, const TeamMember&) = default;
};

struct TeamRecommendation {
  std::string team_id;
  std::string call_id;
  std::string lead;
  MatchScore lead_score;
  std::vector<TeamMember> members;  // excludes the lead, greedy insertion order
  std::optional<Money> proposed_budget;
  std::optional<Money> per_member_allocation;
  ConstraintReport report;

  int size() const noexcept { return 1 + static_cast<int>(members.size()); }
  bool has_participant(std::string_view user_id) const;
  std::vector<std::string> participants() const;  // lead first

  friend bool operator==(const TeamRecommendation&, const TeamRecommendation&) = default;
};

// Stable id derived from (call_id, lead).
std::string make_team_id(std::string_view call_id, std::string_view lead);

struct Candidate {
  const ResearcherProfile* profile = nullptr;
  MatchScore score;
};

// Candidates equal to the lead or scoring below relevance_floor are ignored.
// Absent when no team of two or more can be formed.
std::optional<TeamRecommendation> build_team(const CallRecord& call, const ResearcherProfile& lead,
                                             const MatchScore& lead_score, std::span<const Candidate> candidates,
                                             const TeamingConfig& config);

// Profiles by user_id. Pointers stay valid while the source vector lives.
class ProfileIndex {
 public:
  ProfileIndex() = default;
  explicit ProfileIndex(std::span<const ResearcherProfile> profiles);

  const ResearcherProfile* find(std::string_view user_id) const;
  const ResearcherProfile* find_username(std::string_view username) const;

 private:
  std::map<std::string, const ResearcherProfile*, std::less<>> by_id_;
  std::map<std::string, const ResearcherProfile*, std::less<>> by_username_;
};

// Every user's top-k MatchList and, per call, the users whose list contains
// it. A user's candidates for a call are the other users matched to it.
class MatchTable {
 public:
  static MatchTable compute(std::span<const ResearcherProfile> profiles, std::span<const CallRecord> calls,
                            const CorpusVectorModel* model, const TeamingConfig& config);

  const MatchList* for_user(std::string_view user_id) const;
  // Sorted by (score desc, user_id asc).
  const std::vector<MatchScore>& users_for_call(std::string_view call_id) const;

  std::span<const ResearcherProfile> profiles() const noexcept { return profiles_; }
  std::span<const CallRecord> calls() const noexcept { return calls_; }
  const ProfileIndex& profile_index() const noexcept { return profile_index_; }
  const CallRecord* find_call(std::string_view call_id) const;

 private:
  std::span<const ResearcherProfile> profiles_;
  std::span<const CallRecord> calls_;
  ProfileIndex profile_index_;
  std::map<std::string, std::size_t, std::less<>> call_index_;
  std::map<std::string, MatchList, std::less<>> by_user_;
  std::map<std::string, std::vector<MatchScore>, std::less<>> by_call_;
};

// One team per entry of the user's MatchList with the user as lead, ordered
// by the lead's score (ties by call_id), truncated to
// max_recs_per_user_per_period.
std::vector<TeamRecommendation> recommend_for_user(const ResearcherProfile& user, const MatchTable& table,
                                                   const TeamingConfig& config);
std::vector<TeamRecommendation> recommend_for_user(const ResearcherProfile& user, std::span<const CallRecord> calls,
                                                   std::span<const ResearcherProfile> all_profiles,
                                                   const CorpusVectorModel* model, const TeamingConfig& config);

// Lead is the best-scoring matched user (ties by user_id).
std::optional<TeamRecommendation> recommend_for_call(const CallRecord& call, const MatchTable& table,
                                                     const TeamingConfig& config);
std::optional<TeamRecommendation> recommend_for_call(const CallRecord& call,
                                                     std::span<const ResearcherProfile> all_profiles,
                                                     std::span<const CallRecord> all_calls,
                                                     const CorpusVectorModel* model, const TeamingConfig& config);

struct TeamChange {
  enum class Kind { add, remove, swap };

  Kind kind = Kind::add;
  std::string out;  // remove, swap
  std::string in;   // add, swap

  static TeamChange add(std::string user_id) { return {Kind::add, {}, std::move(user_id)}; }
  static TeamChange remove(std::string user_id) { return {Kind::remove, std::move(user_id), {}}; }
  static TeamChange swap(std::string out_id, std::string in_id) {
    return {Kind::swap, std::move(out_id), std::move(in_id)};
  }
};

std::string_view to_string(TeamChange::Kind kind);

// Report for the hypothetical composition; `team` is not modified. Throws
// Error(unknown_user) for users missing from `profiles` and
// Error(illegal_change) for removing the lead or a non-member, or adding a
// current participant.
ConstraintReport explain_change(const TeamRecommendation& team, const TeamChange& change,
                                const ProfileIndex& profiles, const TeamingConfig& config);

}  // namespace teamrec
