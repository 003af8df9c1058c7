#pragma once

// Retrospective hit@k against actual awards, and Likert feedback
// aggregation.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "teamrec/matching.hpp"
#include "teamrec/records.hpp"

namespace teamrec {

struct FeedbackEvent {
  std::string user_id;
  std::string call_id;
  int rating = 0;  // 1..10
  std::string period_id;
  std::string timestamp;  // ISO-8601, opaque here

  // Throws Error(invalid_argument) when rating is outside 1..10 or an id is
  // empty.
  void validate() const;

  friend bool operator==(const FeedbackEvent&, const FeedbackEvent&) = default;
};

struct UserFeedback {
  int total = 0;
  int at_or_above = 0;
  std::vector<std::string> below_threshold_calls;  // event order

  friend bool operator==(const UserFeedback&, const UserFeedback&) = default;
};

struct FeedbackSummary {
  int threshold = 7;
  int total = 0;
  int at_or_above = 0;
  std::map<std::string, UserFeedback> per_user;

  friend bool operator==(const FeedbackSummary&, const FeedbackSummary&) = default;
};

FeedbackSummary feedback_summary(std::span<const FeedbackEvent> events, int threshold = 7);

struct PiResult {
  std::string username;
  bool hit = false;
  bool has_list = false;  // false: counted as a miss and flagged
  std::vector<std::string> actual_awards;   // sorted
  std::vector<std::string> matched_awards;  // actual awards found in the top k, rank order

  friend bool operator==(const PiResult&, const PiResult&) = default;
};

struct EvalReport {
  int k = 0;
  int users_evaluated = 0;
  int hits = 0;
  double hit_rate = 0.0;  // hits / users_evaluated, 0 when nobody is evaluated
  int awards_total = 0;
  int awards_found = 0;
  double award_hit_rate = 0.0;
  std::vector<PiResult> per_user;                  // sorted by username
  std::vector<std::string> pis_without_lists;      // sorted

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// `lists` holds one ranked list per PI, keyed by MatchList::user_id holding
// the PI username, with award numbers as call ids. Only the first k entries
// of each list count. Throws Error(invalid_argument) when k < 1.
EvalReport hit_rate_at_k(std::span<const MatchList> lists, std::span<const AwardRecord> actuals, int k);

// Awards as scorable calls: call_id = award_number, synopsis = abstract.
std::vector<CallRecord> awards_as_calls(std::span<const AwardRecord> awards);

// Ranks every award for each roster profile whose username is a PI of some
// award. The returned lists carry usernames in user_id. `model` must be built
// over the award abstracts for the vector strategy.
std::vector<MatchList> rank_awards_for_pis(std::span<const AwardRecord> awards,
                                           std::span<const ResearcherProfile> profiles,
                                           const CorpusVectorModel* model, MatchStrategy strategy, int k);

std::string render_eval_report(const EvalReport& report);
std::string render_feedback_summary(const FeedbackSummary& summary);

}  // namespace teamrec
