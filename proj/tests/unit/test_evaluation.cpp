#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "teamrec/evaluation.hpp"
#include "teamrec/ingestion.hpp"

namespace teamrec {
namespace {

AwardRecord award(std::string number, std::string pi) {
  AwardRecord a;
  a.award_number = std::move(number);
  a.pi_username = std::move(pi);
  a.synopsis = "x";
  return a;
}

MatchList list(std::string pi, std::vector<std::string> ranked) {
  MatchList l;
  l.user_id = std::move(pi);
  int score = 100;
  for (auto& id : ranked) l.entries.push_back({l.user_id, id, MatchStrategy::fuzzy, score--, MatchFlag::none});
  l.k = static_cast<int>(l.entries.size());
  return l;
}

TEST(HitRate, AllFirst) {
  const std::vector<AwardRecord> actual = {award("A1", "p"), award("A2", "q")};
  const std::vector<MatchList> lists = {list("p", {"A1", "A2"}), list("q", {"A2", "A1"})};
  const auto r = hit_rate_at_k(lists, actual, 1);
  EXPECT_EQ(r.hits, 2);
  EXPECT_DOUBLE_EQ(r.hit_rate, 1.0);
  EXPECT_EQ(r.awards_found, 2);
}

TEST(HitRate, NoOverlap) {
  const std::vector<AwardRecord> actual = {award("A1", "p")};
  const std::vector<MatchList> lists = {list("p", {"B1", "B2"})};
  const auto r = hit_rate_at_k(lists, actual, 10);
  EXPECT_EQ(r.hits, 0);
  EXPECT_DOUBLE_EQ(r.hit_rate, 0.0);
}

TEST(HitRate, MissingListIsFlaggedMiss) {
  const std::vector<AwardRecord> actual = {award("A1", "p"), award("A2", "ghost")};
  const std::vector<MatchList> lists = {list("p", {"A1"})};
  const auto r = hit_rate_at_k(lists, actual, 5);
  EXPECT_EQ(r.users_evaluated, 2);
  EXPECT_EQ(r.hits, 1);
  EXPECT_DOUBLE_EQ(r.hit_rate, 0.5);
  EXPECT_EQ(r.pis_without_lists, std::vector<std::string>{"ghost"});
  EXPECT_THROW(hit_rate_at_k(lists, actual, 0), Error);
}

TEST(HitRate, OnlyFirstKEntriesCount) {
  const std::vector<AwardRecord> actual = {award("A3", "p")};
  const std::vector<MatchList> lists = {list("p", {"A1", "A2", "A3"})};
  EXPECT_EQ(hit_rate_at_k(lists, actual, 2).hits, 0);
  EXPECT_EQ(hit_rate_at_k(lists, actual, 3).hits, 1);
}

TEST(HitRate, FixtureThreeOfFiveAndMonotone) {
  const auto awards = parse_award_corpus(testing::read_fixture("awards.xml")).awards;
  const auto profiles = parse_researcher_roster(read_roster(testing::read_fixture("roster.tsv"))).admitted;
  std::vector<std::string> abstracts;
  for (const auto& a : awards) abstracts.push_back(a.synopsis);
  const auto model = build_corpus_model(abstracts);
  for (auto strategy : {MatchStrategy::fuzzy, MatchStrategy::vector}) {
    const auto lists = rank_awards_for_pis(awards, profiles, &model, strategy, 15);
    double previous = 0.0;
    for (int k = 1; k <= 15; ++k) {
      const auto r = hit_rate_at_k(lists, awards, k);
      EXPECT_EQ(r.users_evaluated, 5);
      EXPECT_GE(r.hit_rate, previous);
      previous = r.hit_rate;
    }
    const auto r10 = hit_rate_at_k(lists, awards, 10);
    EXPECT_EQ(r10.hits, 3);
    EXPECT_DOUBLE_EQ(r10.hit_rate, 0.6);
    EXPECT_NE(render_eval_report(r10).find("3/5"), std::string::npos);
  }
}

FeedbackEvent event(std::string user, std::string call, int rating) {
  return {std::move(user), std::move(call), rating, "T1", "2014-05-01T00:00:00Z"};
}

TEST(Feedback, FixtureCounts) {
  const auto events = testing::fixture_feedback();
  const auto s = feedback_summary(events);
  EXPECT_EQ(s.total, 70);
  EXPECT_EQ(s.at_or_above, 65);
  int per_user_total = 0;
  for (const auto& [user, f] : s.per_user) {
    per_user_total += f.total;
    EXPECT_EQ(static_cast<int>(f.below_threshold_calls.size()), f.total - f.at_or_above);
  }
  EXPECT_EQ(per_user_total, 70);
  EXPECT_NE(render_feedback_summary(s).find("65 of 70"), std::string::npos);
}

TEST(Feedback, EmptyAndBoundary) {
  const auto empty = feedback_summary({});
  EXPECT_EQ(empty.total, 0);
  EXPECT_EQ(empty.at_or_above, 0);
  const std::vector<FeedbackEvent> sevens = {event("a", "c1", 7), event("b", "c2", 7)};
  const auto s = feedback_summary(sevens);
  EXPECT_EQ(s.at_or_above, s.total);
}

TEST(Feedback, NonIncreasingInThreshold) {
  const auto events = testing::fixture_feedback();
  int previous = 1 << 30;
  for (int t = 1; t <= 11; ++t) {
    const int n = feedback_summary(events, t).at_or_above;
    EXPECT_LE(n, previous);
    previous = n;
  }
}

TEST(Feedback, Validation) {
  EXPECT_NO_THROW(event("a", "c", 1).validate());
  EXPECT_NO_THROW(event("a", "c", 10).validate());
  EXPECT_THROW(event("a", "c", 0).validate(), Error);
  EXPECT_THROW(event("a", "c", 11).validate(), Error);
  EXPECT_THROW(event("", "c", 5).validate(), Error);
}

}  // namespace
}  // namespace teamrec
