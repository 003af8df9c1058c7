#include "teamrec/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "teamrec/common.hpp"

namespace teamrec {

void FeedbackEvent::validate() const {
  if (rating < 1 || rating > 10) {
    throw Error(ErrorCode::invalid_argument, "rating " + std::to_string(rating) + " outside 1..10");
  }
  if (user_id.empty() || call_id.empty()) throw Error(ErrorCode::invalid_argument, "feedback needs user and call");
}

FeedbackSummary feedback_summary(std::span<const FeedbackEvent> events, int threshold) {
  FeedbackSummary summary;
  summary.threshold = threshold;
  for (const auto& e : events) {
    auto& user = summary.per_user[e.user_id];
    ++summary.total;
    ++user.total;
    if (e.rating >= threshold) {
      ++summary.at_or_above;
      ++user.at_or_above;
    } else {
      user.below_threshold_calls.push_back(e.call_id);
    }
  }
  return summary;
}

EvalReport hit_rate_at_k(std::span<const MatchList> lists, std::span<const AwardRecord> actuals, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  std::map<std::string, std::set<std::string>> awards_by_pi;
  for (const auto& a : actuals) awards_by_pi[a.pi_username].insert(a.award_number);
  std::map<std::string_view, const MatchList*> by_user;
  for (const auto& l : lists) by_user.emplace(l.user_id, &l);

  EvalReport report;
  report.k = k;
  for (const auto& [pi, awards] : awards_by_pi) {
    PiResult r;
    r.username = pi;
    r.actual_awards.assign(awards.begin(), awards.end());
    report.awards_total += static_cast<int>(awards.size());
    auto it = by_user.find(pi);
    if (it == by_user.end()) {
      report.pis_without_lists.push_back(pi);
    } else {
      r.has_list = true;
      const auto& entries = it->second->entries;
      const std::size_t n = std::min<std::size_t>(entries.size(), static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < n; ++i) {
        if (awards.contains(entries[i].call_id)) r.matched_awards.push_back(entries[i].call_id);
      }
      r.hit = !r.matched_awards.empty();
    }
    report.awards_found += static_cast<int>(r.matched_awards.size());
    if (r.hit) ++report.hits;
    report.per_user.push_back(std::move(r));
  }
  report.users_evaluated = static_cast<int>(report.per_user.size());
  if (report.users_evaluated > 0) report.hit_rate = static_cast<double>(report.hits) / report.users_evaluated;
  if (report.awards_total > 0) {
    report.award_hit_rate = static_cast<double>(report.awards_found) / report.awards_total;
  }
  return report;
}

std::vector<CallRecord> awards_as_calls(std::span<const AwardRecord> awards) {
  std::vector<CallRecord> calls;
  calls.reserve(awards.size());
  for (const auto& a : awards) {
    CallRecord c;
    c.call_id = a.award_number;
    c.agency_id = a.agency_id;
    if (!a.title.empty()) c.title = a.title;
    c.synopsis = a.synopsis;
    c.budget_total = a.amount;
    calls.push_back(std::move(c));
  }
  return calls;
}

std::vector<MatchList> rank_awards_for_pis(std::span<const AwardRecord> awards,
                                           std::span<const ResearcherProfile> profiles,
                                           const CorpusVectorModel* model, MatchStrategy strategy, int k) {
  std::set<std::string_view> pis;
  for (const auto& a : awards) pis.insert(a.pi_username);
  const auto calls = awards_as_calls(awards);
  const CallScorer scorer(calls, model, strategy);
  std::vector<MatchList> out;
  for (const auto& p : profiles) {
    if (!pis.contains(p.username)) continue;
    MatchList list = scorer.rank(p, k, 0);
    list.user_id = p.username;
    for (auto& e : list.entries) e.user_id = p.username;
    out.push_back(std::move(list));
  }
  return out;
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string render_eval_report(const EvalReport& report) {
  std::string out = "hit@" + std::to_string(report.k) + ": " + std::to_string(report.hits) + "/" +
                    std::to_string(report.users_evaluated) + " = " + fixed3(report.hit_rate) + "\n";
  out += "award-level: " + std::to_string(report.awards_found) + "/" + std::to_string(report.awards_total) + " = " +
         fixed3(report.award_hit_rate) + "\n";
  out += "pi\thit\tactual\tmatched\n";
  for (const auto& r : report.per_user) {
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
      return s.empty() ? std::string("-") : s;
    };
    out += r.username + "\t" + (r.has_list ? (r.hit ? "yes" : "no") : "no (no list)") + "\t" +
           join(r.actual_awards) + "\t" + join(r.matched_awards) + "\n";
  }
  return out;
}

std::string render_feedback_summary(const FeedbackSummary& summary) {
  std::string out = "ratings >= " + std::to_string(summary.threshold) + ": " + std::to_string(summary.at_or_above) +
                    " of " + std::to_string(summary.total) + "\n";
  out += "user\ttotal\tat_or_above\tbelow_threshold_calls\n";
  for (const auto& [user, f] : summary.per_user) {
    std::string below;
    for (std::size_t i = 0; i < f.below_threshold_calls.size(); ++i) {
      below += (i ? "," : "") + f.below_threshold_calls[i];
    }
    out += user + "\t" + std::to_string(f.total) + "\t" + std::to_string(f.at_or_above) + "\t" +
           (below.empty() ? "-" : below) + "\n";
  }
  return out;
}

}  // namespace teamrec
