#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "support/fixtures.hpp"
#include "teamrec/pipeline.hpp"
#include "teamrec/store.hpp"

namespace teamrec {
namespace {

using testing::TempDir;

Json call_json(const std::string& id, const std::string& agency) {
  CallRecord c;
  c.call_id = id;
  c.agency_id = agency;
  c.synopsis = "s";
  return c;
}

Json profile_json(const std::string& id) {
  ResearcherProfile p;
  p.user_id = id;
  p.username = id;
  p.skills = build_skill_set({{"site", {"robotics"}}});
  return p;
}

Json team_json(const std::string& team_id, const std::string& call, const std::string& lead,
               const std::string& member) {
  TeamRecommendation t;
  t.team_id = team_id;
  t.call_id = call;
  t.lead = lead;
  t.members = {{member, {}}};
  return t;
}

TEST(Escape, RoundTrip) {
  for (const std::string id : {"plain", "team/with/slash", ".hidden", "sp ace%", "NSF-14-504", "u_01"}) {
    const auto e = escape_id(id);
    EXPECT_EQ(unescape_id(e), id);
    EXPECT_EQ(e.find('/'), std::string::npos);
    EXPECT_NE(e.front(), '.');
  }
  EXPECT_EQ(escape_id("NSF-14-504"), "NSF-14-504");
}

TEST(Store, PutGetUpsertAndUnknown) {
  auto store = Store::in_memory();
  store->put(kinds::calls, "A", call_json("A", "NSF"));
  EXPECT_EQ(store->get(kinds::calls, "A"), call_json("A", "NSF"));
  store->put(kinds::calls, "A", call_json("A", "DOE"));
  EXPECT_EQ(store->get(kinds::calls, "A")->at("agency_id"), "DOE");
  EXPECT_FALSE(store->get(kinds::calls, "B"));
  EXPECT_EQ(store->count(kinds::calls), 1u);
  EXPECT_THROW(store->put("widgets", "x", Json::object()), Error);
}

TEST(Store, Integrity) {
  auto store = Store::in_memory();
  store->put(kinds::profiles, "a", profile_json("a"));
  store->put(kinds::profiles, "b", profile_json("b"));
  try {
    store->put(kinds::recommendations, "t", team_json("t", "missing", "a", "b"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::integrity_violation);
  }
  store->put(kinds::calls, "C", call_json("C", "NSF"));
  EXPECT_THROW(store->put(kinds::recommendations, "t", team_json("t", "C", "a", "ghost")), Error);
  store->put(kinds::recommendations, "t", team_json("t", "C", "a", "b"));
  Json wf = WorkflowState{};
  wf["team_id"] = "nope";
  EXPECT_THROW(store->put(kinds::workflow, "nope", wf), Error);
  wf["team_id"] = "t";
  EXPECT_NO_THROW(store->put(kinds::workflow, "t", wf));
}

TEST(Store, CompareAndSet) {
  auto store = Store::in_memory();
  store->put(kinds::calls, "C", call_json("C", "NSF"));
  store->put(kinds::profiles, "a", profile_json("a"));
  store->put(kinds::profiles, "b", profile_json("b"));
  store->put(kinds::recommendations, "t", team_json("t", "C", "a", "b"));
  WorkflowState s;
  s.team_id = "t";
  EXPECT_FALSE(store->put_if_version(kinds::workflow, "t", s, 0));
  EXPECT_TRUE(store->put_if_version(kinds::workflow, "t", s, -1));
  s.version = 1;
  EXPECT_TRUE(store->put_if_version(kinds::workflow, "t", s, 0));
  EXPECT_FALSE(store->put_if_version(kinds::workflow, "t", s, 0));
  EXPECT_EQ(store->get(kinds::workflow, "t")->at("version"), 1);
}

TEST(Store, QueryFilters) {
  auto store = Store::in_memory();
  store->put(kinds::calls, "B", call_json("B", "NSF"));
  store->put(kinds::calls, "A", call_json("A", "NSF"));
  store->put(kinds::calls, "C", call_json("C", "DOE"));
  const auto nsf = store->query(kinds::calls, {{"agency_id", "NSF"}});
  ASSERT_EQ(nsf.size(), 2u);
  EXPECT_EQ(nsf[0].at("call_id"), "A");
  EXPECT_EQ(store->query(kinds::calls).size(), 3u);
  EXPECT_TRUE(store->query(kinds::calls, {{"agency_id", "NASA"}}).empty());
  EXPECT_EQ(store->ids(kinds::calls), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(Store, FixtureAgencyQuery) {
  auto store = Store::in_memory();
  publish(*store, run_pipeline(testing::fixture_corpus(), TeamingConfig{}, testing::fixture_date()));
  // Counted from the agency headers of calls.rec.
  EXPECT_EQ(store->query(kinds::calls, {{"agency_id", "NSF"}}).size(), 12u);
  EXPECT_EQ(store->query(kinds::calls, {{"agency_id", "NIH"}}).size(), 3u);
  EXPECT_EQ(store->query(kinds::calls, {{"agency_id", "DOE"}}).size(), 2u);
}

FeedbackEvent event(int rating, std::string call = "C") { return {"u", std::move(call), rating, "T1", "t"}; }

TEST(Store, EventLogAppendOnly) {
  auto store = Store::in_memory();
  EXPECT_EQ(store->append_event(event(7, "c1")), 1);
  EXPECT_EQ(store->append_event(event(3, "c2")), 2);
  EXPECT_THROW(store->append_event(event(11)), Error);
  const auto events = store->replay_events();
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].call_id, "c1");
  EXPECT_EQ(events[1].call_id, "c2");
}

TEST(Store, DurableReloadAndSnapshot) {
  TempDir dir;
  Json before;
  {
    auto store = Store::open(dir.path() / "db");
    publish(*store, run_pipeline(testing::fixture_corpus(), TeamingConfig{}, testing::fixture_date()));
    for (const auto& e : testing::fixture_feedback()) store->append_event(e);
    before = store->dump_state();
    store->snapshot(dir.path() / "snap");
    EXPECT_THROW(store->snapshot(dir.path() / "db"), Error);
  }
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "db" / "STORE_VERSION"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "db" / "events" / "segment-000001.log"));
  const auto reloaded = Store::load(dir.path() / "db");
  EXPECT_EQ(reloaded->dump_state(), before);
  EXPECT_EQ(reloaded->replay_events(), testing::fixture_feedback());
  const auto snap = Store::load(dir.path() / "snap");
  EXPECT_EQ(snap->dump_state().dump(), before.dump());
}

TEST(Store, VersionMismatch) {
  TempDir dir;
  { Store::open(dir.path()); }
  std::ofstream(dir.path() / "STORE_VERSION") << "2\n";
  try {
    Store::open(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::version_mismatch);
  }
}

TEST(Store, TornTrailingLineIgnored) {
  TempDir dir;
  {
    auto store = Store::open(dir.path());
    store->append_event(event(5));
  }
  std::ofstream(dir.path() / "events" / "segment-000001.log", std::ios::app) << "{\"event\": {\"user";
  auto store = Store::open(dir.path());
  EXPECT_EQ(store->replay_events().size(), 1u);
  EXPECT_EQ(store->append_event(event(6)), 2);
  EXPECT_EQ(Store::open(dir.path())->replay_events().size(), 2u);
}

TEST(Store, ConcurrentReadersAndWriter) {
  auto store = Store::in_memory();
  std::vector<std::thread> threads;
  threads.emplace_back([&] {
    for (int i = 0; i < 200; ++i) store->append_event(event(1 + i % 10));
  });
  for (int t = 0; t < 3; ++t) {
    threads.emplace_back([&] {
      std::size_t last = 0;
      for (int i = 0; i < 200; ++i) {
        const auto n = store->replay_events().size();
        EXPECT_GE(n, last);
        last = n;
      }
    });
  }
  for (auto& t : threads) t.join();
  const auto events = store->replay_events();
  ASSERT_EQ(events.size(), 200u);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(events[static_cast<std::size_t>(i)].rating, 1 + i % 10);
}

}  // namespace
}  // namespace teamrec
