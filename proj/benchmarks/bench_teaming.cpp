#include <benchmark/benchmark.h>

#include "synthetic.hpp"
#include "teamrec/teaming.hpp"

namespace teamrec::bench {
namespace {

struct Pool {
  CallRecord call;
  ResearcherProfile lead;
  std::vector<ResearcherProfile> people;
  std::vector<Candidate> candidates;
};

Pool make_pool(int n) {
  std::mt19937_64 rng(7);
  Pool pool;
  pool.call = make_calls(rng, 1, 40).front();
  pool.lead = make_user(rng, "lead", 3);
  for (int i = 0; i < n; ++i) pool.people.push_back(make_user(rng, "u" + std::to_string(i), 3));
  std::uniform_int_distribution<int> score(0, 100);
  for (const auto& p : pool.people) pool.candidates.push_back({&p, {p.user_id, pool.call.call_id, MatchStrategy::fuzzy, score(rng), MatchFlag::none}});
  return pool;
}

void BM_BuildTeam(benchmark::State& state) {
  const auto pool = make_pool(static_cast<int>(state.range(0)));
  const MatchScore lead_score{"lead", pool.call.call_id, MatchStrategy::fuzzy, 90, MatchFlag::none};
  TeamingConfig config;
  config.relevance_floor = 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_team(pool.call, pool.lead, lead_score, pool.candidates, config));
}
BENCHMARK(BM_BuildTeam)->Arg(10)->Arg(100)->Arg(1000);

void BM_CheckConstraints(benchmark::State& state) {
  const auto pool = make_pool(static_cast<int>(state.range(0)));
  std::vector<const SkillSet*> team{&pool.lead.skills};
  for (const auto& p : pool.people) team.push_back(&p.skills);
  const TeamingConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(check_constraints(team, pool.call.budget_total, config));
}
BENCHMARK(BM_CheckConstraints)->Arg(2)->Arg(5)->Arg(20);

}  // namespace
}  // namespace teamrec::bench
