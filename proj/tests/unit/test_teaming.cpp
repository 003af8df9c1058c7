#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "teamrec/pipeline.hpp"
#include "teamrec/teaming.hpp"

namespace teamrec {
namespace {

using testing::canon_set;
using testing::make_profile;
using testing::oracle_check;
using testing::oracle_greedy;
using testing::OracleCandidate;

MatchScore score_for(const std::string& user, const std::string& call, int score) {
  return {user, call, MatchStrategy::fuzzy, score, MatchFlag::none};
}

ConstraintReport check(const std::vector<ResearcherProfile>& team, std::optional<Money> budget,
                       const TeamingConfig& config = {}) {
  std::vector<const SkillSet*> sets;
  for (const auto& p : team) sets.push_back(&p.skills);
  return check_constraints(sets, budget, config);
}

TEST(Config, ValidateRejectsBrokenInvariants) {
  TeamingConfig c;
  EXPECT_NO_THROW(c.validate());
  c.team_cap = 1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.hard_ceiling = 4;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.per_participant_floor = Money{0};
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.page_size = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(SizeCap, Examples) {
  TeamingConfig c;
  EXPECT_EQ(team_size_cap(std::nullopt, c), 5);
  EXPECT_EQ(team_size_cap(Money{150'000}, c), 3);
  EXPECT_EQ(team_size_cap(Money{1'000'000}, c), 5);
  c.allow_large_teams = true;
  EXPECT_EQ(team_size_cap(Money{1'000'000}, c), 10);
  EXPECT_EQ(team_size_cap(Money{350'000}, c), 7);
  EXPECT_EQ(team_size_cap(Money{10'000}, c), 0);
}

TEST(SizeCap, MatchesFormulaOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    TeamingConfig c;
    c.team_cap = std::uniform_int_distribution<int>(2, 8)(rng);
    c.hard_ceiling = c.team_cap + std::uniform_int_distribution<int>(0, 6)(rng);
    c.allow_large_teams = i % 2 == 0;
    c.per_participant_floor = Money{std::uniform_int_distribution<int>(1, 100)(rng) * 1000LL};
    std::optional<Money> budget;
    if (i % 5) budget = Money{std::uniform_int_distribution<long long>(0, 2'000'000)(rng)};
    EXPECT_EQ(team_size_cap(budget, c), testing::oracle_size_cap(budget, c));
  }
}

TEST(SizeCap, RaisingFloorNeverGrowsCap) {
  TeamingConfig low, high;
  high.per_participant_floor = Money{80'000};
  for (long long b = 0; b <= 1'000'000; b += 12'345) {
    EXPECT_LE(team_size_cap(Money{b}, high), team_size_cap(Money{b}, low));
  }
}

TEST(Constraints, IdenticalSkillSetsViolateUnique) {
  const auto a = make_profile("a", {"Robotics"});
  const auto b = make_profile("b", {"Robotics"});
  const auto report = check({a, b}, std::nullopt);
  EXPECT_FALSE(report.get(ConstraintId::unique_skill).satisfied);
  EXPECT_NE(report.get(ConstraintId::unique_skill).explanation.find("a"), std::string::npos);
  EXPECT_TRUE(report.get(ConstraintId::size_cap).satisfied);
  EXPECT_TRUE(report.get(ConstraintId::budget_floor).satisfied);
  EXPECT_FALSE(report.all_satisfied());
}

TEST(Constraints, BudgetFloorArithmetic) {
  const std::vector<ResearcherProfile> team = {make_profile("a", {"x1"}), make_profile("b", {"x2"}),
                                               make_profile("c", {"x3"})};
  const auto ok = check(team, Money{160'000});
  EXPECT_TRUE(ok.get(ConstraintId::budget_floor).satisfied);
  EXPECT_NE(ok.get(ConstraintId::budget_floor).explanation.find("53,333"), std::string::npos);
  EXPECT_TRUE(ok.all_satisfied());
  EXPECT_FALSE(check(team, Money{149'999}).get(ConstraintId::budget_floor).satisfied);
  EXPECT_TRUE(check(team, Money{150'000}).get(ConstraintId::budget_floor).satisfied);
  const auto unknown = check(team, std::nullopt).get(ConstraintId::budget_floor);
  EXPECT_TRUE(unknown.satisfied);
  EXPECT_NE(unknown.explanation.find("unknown"), std::string::npos);
}

TEST(Constraints, SixMembersNoBudgetExceedCap) {
  std::vector<ResearcherProfile> team;
  for (int i = 0; i < 6; ++i) team.push_back(make_profile("m" + std::to_string(i), {"skill" + std::to_string(i)}));
  const auto report = check(team, std::nullopt);
  EXPECT_FALSE(report.get(ConstraintId::size_cap).satisfied);
  EXPECT_TRUE(report.get(ConstraintId::unique_skill).satisfied);
}

TEST(Constraints, UniqueAgainstUnionNotPairwise) {
  // b's skills are each shared with someone, though with no single member.
  const auto a = make_profile("a", {"alpha", "own a"});
  const auto b = make_profile("b", {"alpha", "gamma"});
  const auto c = make_profile("c", {"gamma", "own c"});
  EXPECT_FALSE(check({a, b, c}, std::nullopt).get(ConstraintId::unique_skill).satisfied);
}

TEST(Constraints, MatchOracleOnRandomTeams) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    auto inst = testing::random_team_instance(rng, 7);
    std::vector<ResearcherProfile> team = {inst.lead};
    team.insert(team.end(), inst.candidates.begin(), inst.candidates.end());
    std::vector<testing::CanonSet> canons;
    for (const auto& p : team) canons.push_back(canon_set(p.skills));
    const auto report = check(team, inst.call.budget_total, inst.config);
    const auto verdict = oracle_check(canons, inst.call.budget_total, inst.config);
    EXPECT_EQ(report.get(ConstraintId::unique_skill).satisfied, verdict.unique_ok);
    EXPECT_EQ(report.all_satisfied(), verdict.valid());
  }
}

TEST(Allocate, Floors) {
  EXPECT_EQ(allocate_budget(5, Money{250'000}), Money{50'000});
  EXPECT_EQ(allocate_budget(4, Money{200'001}), Money{50'000});
  EXPECT_FALSE(allocate_budget(3, std::nullopt));
}

TEST(BuildTeam, NoCandidatesIsAbsent) {
  CallRecord call;
  call.call_id = "C";
  const auto lead = make_profile("lead", {"robotics"});
  EXPECT_FALSE(build_team(call, lead, score_for("lead", "C", 90), {}, TeamingConfig{}));
}

TEST(BuildTeam, PublishedTableShape) {
  // Five researchers at 84, 84, 83, 80, 76 with distinct skills and no
  // budget. The first 84 leads; the other four join in score order.
  CallRecord call;
  call.call_id = "C";
  const auto lead = make_profile("r1", {"planning"});
  const std::vector<ResearcherProfile> people = {make_profile("r5", {"vision"}), make_profile("r3", {"graphs"}),
                                                 make_profile("r2", {"speech"}), make_profile("r4", {"robots"})};
  const std::vector<int> scores = {76, 83, 84, 80};
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < people.size(); ++i) {
    candidates.push_back({&people[i], score_for(people[i].user_id, "C", scores[i])});
  }
  TeamingConfig config;
  config.relevance_floor = 0;
  const auto team = build_team(call, lead, score_for("r1", "C", 84), candidates, config);
  ASSERT_TRUE(team);
  ASSERT_EQ(team->size(), 5);
  std::vector<std::string> ids;
  std::vector<int> got_scores;
  for (const auto& m : team->members) {
    ids.push_back(m.user_id);
    got_scores.push_back(m.score.score);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"r2", "r3", "r4", "r5"}));
  EXPECT_EQ(got_scores, (std::vector<int>{84, 83, 80, 76}));
  EXPECT_TRUE(team->report.all_satisfied());
  EXPECT_EQ(team->team_id, make_team_id("C", "r1"));
  EXPECT_FALSE(team->proposed_budget);
  EXPECT_FALSE(team->per_member_allocation);
}

TEST(BuildTeam, TiesByUserId) {
  CallRecord call;
  call.call_id = "C";
  const auto lead = make_profile("lead", {"planning"});
  const std::vector<ResearcherProfile> people = {make_profile("b", {"vision"}), make_profile("a", {"speech"})};
  std::vector<Candidate> candidates;
  for (const auto& p : people) candidates.push_back({&p, score_for(p.user_id, "C", 84)});
  TeamingConfig config;
  config.team_cap = 2;
  const auto team = build_team(call, lead, score_for("lead", "C", 90), candidates, config);
  ASSERT_TRUE(team);
  ASSERT_EQ(team->members.size(), 1u);
  EXPECT_EQ(team->members[0].user_id, "a");
}

TEST(BuildTeam, SkipsAndContinues) {
  CallRecord call;
  call.call_id = "C";
  call.budget_total = Money{200'000};
  const auto lead = make_profile("lead", {"robotics"});
  const std::vector<ResearcherProfile> people = {make_profile("a", {"robotics"}), make_profile("b", {"vision"}),
                                                 make_profile("c", {"hydrology"})};
  std::vector<Candidate> candidates;
  for (const auto& p : people) candidates.push_back({&p, score_for(p.user_id, "C", 60)});
  const auto team = build_team(call, lead, score_for("lead", "C", 60), candidates, TeamingConfig{});
  ASSERT_TRUE(team);
  ASSERT_EQ(team->members.size(), 2u);
  EXPECT_EQ(team->members[0].user_id, "b");
  EXPECT_EQ(team->members[1].user_id, "c");
  EXPECT_EQ(team->per_member_allocation, Money{66'666});
}

TEST(BuildTeam, EqualsGreedyOracle) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 1500; ++i) {
    auto inst = testing::random_team_instance(rng, 12);
    inst.config.relevance_floor = 0;
    std::vector<Candidate> candidates;
    std::vector<OracleCandidate> oracle_candidates;
    for (std::size_t j = 0; j < inst.candidates.size(); ++j) {
      candidates.push_back({&inst.candidates[j], inst.scores[j]});
      oracle_candidates.push_back({inst.candidates[j].user_id, inst.scores[j].score, canon_set(inst.candidates[j].skills)});
    }
    const auto expected = oracle_greedy(canon_set(inst.lead.skills), oracle_candidates, inst.call.budget_total, inst.config);
    const auto team = build_team(inst.call, inst.lead, inst.lead_score, candidates, inst.config);
    if (expected.empty()) {
      EXPECT_FALSE(team);
      continue;
    }
    ASSERT_TRUE(team);
    std::vector<std::string> got;
    for (const auto& m : team->members) got.push_back(m.user_id);
    EXPECT_EQ(got, expected);
    EXPECT_TRUE(team->report.all_satisfied());
  }
}

struct FixtureRun {
  PipelineOutput output = run_pipeline(testing::fixture_corpus(), TeamingConfig{}, testing::fixture_date());
};

const FixtureRun& fixture_run() {
  static const FixtureRun run;
  return run;
}

TEST(Recommend, FixtureTeamsAreValid) {
  const auto& out = fixture_run().output;
  const auto table = MatchTable::compute(out.corpus.profiles, out.corpus.calls, &out.model, TeamingConfig{});
  for (const auto& user : out.corpus.profiles) {
    const auto recs = recommend_for_user(user, table, TeamingConfig{});
    int previous = 101;
    for (const auto& r : recs) {
      EXPECT_TRUE(r.report.all_satisfied());
      EXPECT_EQ(r.lead, user.user_id);
      EXPECT_GE(r.size(), 2);
      EXPECT_LE(r.lead_score.score, previous);
      previous = r.lead_score.score;
      std::vector<std::string> ids;
      for (const auto& m : r.members) {
        EXPECT_NE(m.user_id, r.lead);
        EXPECT_TRUE(table.for_user(m.user_id)->contains(r.call_id));
      }
    }
  }
}

TEST(Recommend, TruncatesToPerPeriodCap) {
  const auto& out = fixture_run().output;
  TeamingConfig config;
  config.relevance_floor = 10;
  const auto table = MatchTable::compute(out.corpus.profiles, out.corpus.calls, &out.model, config);
  const auto* user = table.profile_index().find("u01");
  ASSERT_NE(user, nullptr);
  const auto all = recommend_for_user(*user, table, config);
  ASSERT_GE(all.size(), 3u);
  config.max_recs_per_user_per_period = 2;
  const auto capped = recommend_for_user(*user, table, config);
  ASSERT_EQ(capped.size(), 2u);
  EXPECT_EQ(capped[0], all[0]);
  EXPECT_EQ(capped[1], all[1]);
}

TEST(Recommend, NoMatchesGivesEmpty) {
  const std::vector<CallRecord> calls = {[] {
    CallRecord c;
    c.call_id = "C";
    c.synopsis = "ocean hydrology";
    return c;
  }()};
  const std::vector<ResearcherProfile> people = {make_profile("a", {"cryptography"}), make_profile("b", {"compilers"})};
  const auto model = build_corpus_model({"ocean hydrology"});
  EXPECT_TRUE(recommend_for_user(people[0], calls, people, &model, TeamingConfig{}).empty());
}

TEST(RecommendForCall, TwoUsersHigherScoreLeads) {
  CallRecord c;
  c.call_id = "C";
  c.synopsis = "robotics vision planning";
  const std::vector<CallRecord> calls = {c};
  const std::vector<ResearcherProfile> people = {make_profile("a", {"robotics"}),
                                                 make_profile("b", {"robotics vision"})};
  TeamingConfig config;
  config.strategy = MatchStrategy::fuzzy;
  // a: 1 of {robot, vision, plan} vs {robot}: 1 * 4 / 6 -> 67; b: 2 * 5 / 12 -> 83
  const auto team = recommend_for_call(c, people, calls, nullptr, config);
  ASSERT_TRUE(team);
  EXPECT_EQ(team->lead, "b");
  ASSERT_EQ(team->members.size(), 1u);
  EXPECT_EQ(team->members[0].user_id, "a");
  EXPECT_EQ(team->lead_score.score, 83);
  EXPECT_EQ(team->members[0].score.score, 67);

  const std::vector<ResearcherProfile> one = {people[1], make_profile("z", {"botany"})};
  EXPECT_FALSE(recommend_for_call(c, one, calls, nullptr, config));
}

TEST(ExplainChange, HypotheticalCompositions) {
  std::vector<ResearcherProfile> people;
  for (int i = 0; i < 6; ++i) people.push_back(make_profile("m" + std::to_string(i), {"skill" + std::to_string(i)}));
  people.push_back(make_profile("dup", {"skill1"}));
  const ProfileIndex index(people);
  TeamRecommendation team;
  team.team_id = "t";
  team.call_id = "C";
  team.lead = "m0";
  for (int i = 1; i < 5; ++i) team.members.push_back({"m" + std::to_string(i), score_for("m" + std::to_string(i), "C", 50)});
  const auto before = team;

  const auto add = explain_change(team, TeamChange::add("m5"), index, TeamingConfig{});
  EXPECT_FALSE(add.get(ConstraintId::size_cap).satisfied);
  EXPECT_TRUE(add.get(ConstraintId::unique_skill).satisfied);

  const auto swap = explain_change(team, TeamChange::swap("m4", "dup"), index, TeamingConfig{});
  EXPECT_FALSE(swap.get(ConstraintId::unique_skill).satisfied);
  EXPECT_TRUE(swap.get(ConstraintId::size_cap).satisfied);

  team.proposed_budget = Money{150'000};
  team.members.resize(2);
  const auto remove = explain_change(team, TeamChange::remove("m2"), index, TeamingConfig{});
  const std::vector<ResearcherProfile> hypothetical = {people[0], people[1]};
  EXPECT_EQ(remove, check(hypothetical, Money{150'000}));
  EXPECT_TRUE(remove.all_satisfied());

  EXPECT_THROW(explain_change(team, TeamChange::remove("m0"), index, TeamingConfig{}), Error);
  EXPECT_THROW(explain_change(team, TeamChange::remove("m5"), index, TeamingConfig{}), Error);
  EXPECT_THROW(explain_change(team, TeamChange::add("m1"), index, TeamingConfig{}), Error);
  try {
    explain_change(team, TeamChange::add("ghost"), index, TeamingConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_user);
  }
  team.proposed_budget.reset();
  team.members = before.members;
  EXPECT_EQ(team, before);
}

TEST(TeamId, StableAndDistinct) {
  EXPECT_EQ(make_team_id("C", "a"), make_team_id("C", "a"));
  EXPECT_NE(make_team_id("C", "a"), make_team_id("C", "b"));
  EXPECT_NE(make_team_id("Ca", ""), make_team_id("C", "a"));
  EXPECT_EQ(make_team_id("C", "a").rfind("team-", 0), 0u);
}

}  // namespace
}  // namespace teamrec
