#include "teamrec/teaming.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "teamrec/common.hpp"

namespace teamrec {

void TeamingConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::invalid_argument, what);
  };
  require(k >= 0, "k must be >= 0");
  require(team_cap >= 2, "team_cap must be >= 2");
  require(per_participant_floor.dollars > 0, "per_participant_floor must be > 0");
  require(hard_ceiling >= team_cap, "hard_ceiling must be >= team_cap");
  require(relevance_floor >= 0 && relevance_floor <= 100, "relevance_floor must be within [0, 100]");
  require(page_size >= 1, "page_size must be >= 1");
  require(!max_recs_per_user_per_period || *max_recs_per_user_per_period >= 0,
          "max_recs_per_user_per_period must be >= 0");
}

std::string_view to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::size_cap: return "size_cap";
    case ConstraintId::budget_floor: return "budget_floor";
    case ConstraintId::unique_skill: return "unique_skill";
  }
  return "unknown";
}

std::string_view to_string(TeamChange::Kind kind) {
  switch (kind) {
    case TeamChange::Kind::add: return "add";
    case TeamChange::Kind::remove: return "remove";
    case TeamChange::Kind::swap: return "swap";
  }
  return "unknown";
}

bool ConstraintReport::all_satisfied() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.satisfied; });
}

int team_size_cap(std::optional<Money> budget, const TeamingConfig& config) {
  if (!budget) return config.team_cap;
  const std::int64_t funded = budget->dollars / config.per_participant_floor.dollars;
  if (config.allow_large_teams && funded > config.team_cap) {
    return static_cast<int>(std::min<std::int64_t>(funded, config.hard_ceiling));
  }
  return static_cast<int>(std::max<std::int64_t>(0, std::min<std::int64_t>(config.team_cap, funded)));
}

int size_cap_limit(std::optional<Money> budget, const TeamingConfig& config) {
  if (budget && config.allow_large_teams) {
    const std::int64_t funded = budget->dollars / config.per_participant_floor.dollars;
    if (funded > config.team_cap) return static_cast<int>(std::min<std::int64_t>(funded, config.hard_ceiling));
  }
  return config.team_cap;
}

std::optional<Money> allocate_budget(int team_size, std::optional<Money> budget) {
  if (team_size < 1) throw Error(ErrorCode::invalid_argument, "team size must be >= 1");
  if (!budget) return std::nullopt;
  return Money{budget->dollars / team_size};
}

namespace {

std::string member_label(std::span<const std::string> labels, std::size_t i) {
  return i < labels.size() ? labels[i] : "member #" + std::to_string(i + 1);
}

ConstraintReport check_with_labels(std::span<const SkillSet* const> team, std::optional<Money> budget,
                                   const TeamingConfig& config, std::span<const std::string> labels) {
  if (team.empty()) throw Error(ErrorCode::invalid_argument, "constraint check needs a non-empty team");
  const auto n = static_cast<std::int64_t>(team.size());
  ConstraintReport report;

  {
    auto& c = report.checks[0];
    c.id = ConstraintId::size_cap;
    const int limit = size_cap_limit(budget, config);
    c.satisfied = n <= limit;
    c.explanation = "team of " + std::to_string(n) + (c.satisfied ? " within" : " exceeds") + " size cap " +
                    std::to_string(limit);
  }
  {
    auto& c = report.checks[1];
    c.id = ConstraintId::budget_floor;
    const Money floor = config.per_participant_floor;
    if (!budget) {
      c.satisfied = true;
      c.explanation = "budget unknown; per-participant floor " + format_money(floor) + " not checked";
    } else {
      c.satisfied = budget->dollars >= floor.dollars * n;
      c.explanation = format_money(*budget) + " / " + std::to_string(n) + " = " +
                      format_money(Money{budget->dollars / n}) + " per participant" +
                      (c.satisfied ? " >= " : " < ") + format_money(floor);
    }
  }
  {
    auto& c = report.checks[2];
    c.id = ConstraintId::unique_skill;
    std::map<Tokens, int> owners;
    for (const SkillSet* skills : team) {
      for (const auto& skill : skills->skills()) ++owners[skill.canon];
    }
    std::vector<std::string> lacking;
    for (std::size_t i = 0; i < team.size(); ++i) {
      const auto& skills = team[i]->skills();
      const bool unique = std::any_of(skills.begin(), skills.end(),
                                      [&](const Skill& s) { return owners[s.canon] == 1; });
      if (!unique) lacking.push_back(member_label(labels, i));
    }
    c.satisfied = lacking.empty();
    if (c.satisfied) {
      c.explanation = "each of " + std::to_string(n) + " members has a skill no other member has";
    } else {
      std::string names;
      for (std::size_t i = 0; i < lacking.size(); ++i) names += (i ? ", " : "") + lacking[i];
      c.explanation = std::to_string(lacking.size()) + " of " + std::to_string(n) +
                      " members have no skill absent from the rest of the team: " + names;
    }
  }
  return report;
}

// Canon ownership counts for incremental unique-skill checks.
class SkillLedger {
 public:
  void add(const SkillSet& skills) {
    for (const auto& s : skills.skills()) ++owners_[s.canon];
  }
  void remove(const SkillSet& skills) {
    for (const auto& s : skills.skills()) {
      if (--owners_[s.canon] == 0) owners_.erase(s.canon);
    }
  }
  bool has_unique(const SkillSet& skills) const {
    return std::any_of(skills.skills().begin(), skills.skills().end(), [&](const Skill& s) {
      auto it = owners_.find(s.canon);
      return it != owners_.end() && it->second == 1;
    });
  }

 private:
  std::map<Tokens, int> owners_;
};

}  // namespace

ConstraintReport check_constraints(std::span<const SkillSet* const> team, std::optional<Money> budget,
                                   const TeamingConfig& config) {
  return check_with_labels(team, budget, config, {});
}

bool TeamRecommendation::has_participant(std::string_view user_id) const {
  if (lead == user_id) return true;
  return std::any_of(members.begin(), members.end(), [&](const TeamMember& m) { return m.user_id == user_id; });
}

std::vector<std::string> TeamRecommendation::participants() const {
  std::vector<std::string> out{lead};
  for (const auto& m : members) out.push_back(m.user_id);
  return out;
}

std::string make_team_id(std::string_view call_id, std::string_view lead) {
  std::uint64_t hash = 1469598103934665603ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
  };
  feed(call_id);
  feed(std::string_view("\x1f", 1));
  feed(lead);
  char buf[24];
  std::snprintf(buf, sizeof buf, "team-%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::optional<TeamRecommendation> build_team(const CallRecord& call, const ResearcherProfile& lead,
                                             const MatchScore& lead_score, std::span<const Candidate> candidates,
                                             const TeamingConfig& config) {
  std::vector<const Candidate*> order;
  std::set<std::string_view> seen{lead.user_id};
  for (const auto& c : candidates) {
    if (!c.profile || c.score.score < config.relevance_floor) continue;
    if (!seen.insert(c.profile->user_id).second) continue;
    order.push_back(&c);
  }
  std::sort(order.begin(), order.end(), [](const Candidate* a, const Candidate* b) {
    if (a->score.score != b->score.score) return a->score.score > b->score.score;
    return a->profile->user_id < b->profile->user_id;
  });

  const std::optional<Money> budget = call.budget_total;
  const int cap = team_size_cap(budget, config);
  const int limit = size_cap_limit(budget, config);
  const std::int64_t floor = config.per_participant_floor.dollars;

  std::vector<const ResearcherProfile*> team{&lead};
  std::vector<const Candidate*> chosen;
  SkillLedger ledger;
  ledger.add(lead.skills);

  for (const Candidate* c : order) {
    const auto size = static_cast<int>(team.size());
    if (size >= cap) break;
    const int next = size + 1;
    if (next > limit) break;
    if (budget && budget->dollars < floor * next) break;

    ledger.add(c->profile->skills);
    bool unique = ledger.has_unique(c->profile->skills);
    for (std::size_t i = 0; unique && i < team.size(); ++i) unique = ledger.has_unique(team[i]->skills);
    if (!unique) {
      ledger.remove(c->profile->skills);
      continue;
    }
    team.push_back(c->profile);
    chosen.push_back(c);
  }
  if (team.size() < 2) return std::nullopt;

  TeamRecommendation rec;
  rec.call_id = call.call_id;
  rec.lead = lead.user_id;
  rec.team_id = make_team_id(call.call_id, lead.user_id);
  rec.lead_score = lead_score;
  rec.lead_score.user_id = lead.user_id;
  rec.lead_score.call_id = call.call_id;
  for (const Candidate* c : chosen) {
    TeamMember m{c->profile->user_id, c->score};
    m.score.user_id = c->profile->user_id;
    m.score.call_id = call.call_id;
    rec.members.push_back(std::move(m));
  }
  rec.proposed_budget = budget;
  rec.per_member_allocation = allocate_budget(rec.size(), budget);

  std::vector<const SkillSet*> skill_sets;
  std::vector<std::string> labels;
  for (const auto* p : team) {
    skill_sets.push_back(&p->skills);
    labels.push_back(p->user_id);
  }
  rec.report = check_with_labels(skill_sets, budget, config, labels);
  return rec;
}

// ---- indexes ----------------------------------------------------------------

ProfileIndex::ProfileIndex(std::span<const ResearcherProfile> profiles) {
  for (const auto& p : profiles) {
    by_id_.emplace(p.user_id, &p);
    by_username_.emplace(p.username, &p);
  }
}

const ResearcherProfile* ProfileIndex::find(std::string_view user_id) const {
  auto it = by_id_.find(user_id);
  return it == by_id_.end() ? nullptr : it->second;
}

const ResearcherProfile* ProfileIndex::find_username(std::string_view username) const {
  auto it = by_username_.find(username);
  return it == by_username_.end() ? nullptr : it->second;
}

MatchTable MatchTable::compute(std::span<const ResearcherProfile> profiles, std::span<const CallRecord> calls,
                               const CorpusVectorModel* model, const TeamingConfig& config) {
  config.validate();
  MatchTable table;
  table.profiles_ = profiles;
  table.calls_ = calls;
  table.profile_index_ = ProfileIndex(profiles);
  for (std::size_t i = 0; i < calls.size(); ++i) table.call_index_.emplace(calls[i].call_id, i);

  const CallScorer scorer(calls, model, config.strategy);
  for (const auto& user : profiles) {
    MatchList list = scorer.rank(user, config.k, config.relevance_floor);
    for (const auto& entry : list.entries) table.by_call_[entry.call_id].push_back(entry);
    table.by_user_.emplace(user.user_id, std::move(list));
  }
  for (auto& [call_id, users] : table.by_call_) {
    std::sort(users.begin(), users.end(), [](const MatchScore& a, const MatchScore& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.user_id < b.user_id;
    });
  }
  return table;
}

const MatchList* MatchTable::for_user(std::string_view user_id) const {
  auto it = by_user_.find(user_id);
  return it == by_user_.end() ? nullptr : &it->second;
}

const std::vector<MatchScore>& MatchTable::users_for_call(std::string_view call_id) const {
  static const std::vector<MatchScore> kNone;
  auto it = by_call_.find(call_id);
  return it == by_call_.end() ? kNone : it->second;
}

const CallRecord* MatchTable::find_call(std::string_view call_id) const {
  auto it = call_index_.find(call_id);
  return it == call_index_.end() ? nullptr : &calls_[it->second];
}

// ---- recommendations --------------------------------------------------------

namespace {

std::vector<Candidate> candidates_for(const MatchTable& table, std::string_view call_id, std::string_view exclude) {
  std::vector<Candidate> out;
  for (const auto& s : table.users_for_call(call_id)) {
    if (s.user_id == exclude) continue;
    if (const auto* p = table.profile_index().find(s.user_id)) out.push_back({p, s});
  }
  return out;
}

}  // namespace

std::vector<TeamRecommendation> recommend_for_user(const ResearcherProfile& user, const MatchTable& table,
                                                   const TeamingConfig& config) {
  std::vector<TeamRecommendation> out;
  const MatchList* list = table.for_user(user.user_id);
  if (!list) return out;
  for (const auto& entry : list->entries) {
    const CallRecord* call = table.find_call(entry.call_id);
    if (!call) continue;
    const auto candidates = candidates_for(table, entry.call_id, user.user_id);
    if (auto team = build_team(*call, user, entry, candidates, config)) out.push_back(std::move(*team));
  }
  // MatchList order already is (lead score desc, call_id asc).
  if (config.max_recs_per_user_per_period &&
      out.size() > static_cast<std::size_t>(*config.max_recs_per_user_per_period)) {
    out.resize(static_cast<std::size_t>(*config.max_recs_per_user_per_period));
  }
  return out;
}

std::vector<TeamRecommendation> recommend_for_user(const ResearcherProfile& user, std::span<const CallRecord> calls,
                                                   std::span<const ResearcherProfile> all_profiles,
                                                   const CorpusVectorModel* model, const TeamingConfig& config) {
  const MatchTable table = MatchTable::compute(all_profiles, calls, model, config);
  if (!table.profile_index().find(user.user_id)) {
    // A lead outside the roster still gets teams from the roster.
    std::vector<ResearcherProfile> extended(all_profiles.begin(), all_profiles.end());
    extended.push_back(user);
    const MatchTable wider = MatchTable::compute(extended, calls, model, config);
    return recommend_for_user(extended.back(), wider, config);
  }
  return recommend_for_user(user, table, config);
}

std::optional<TeamRecommendation> recommend_for_call(const CallRecord& call, const MatchTable& table,
                                                     const TeamingConfig& config) {
  const auto& matched = table.users_for_call(call.call_id);
  if (matched.empty()) return std::nullopt;
  const ResearcherProfile* lead = table.profile_index().find(matched.front().user_id);
  if (!lead) return std::nullopt;
  const auto candidates = candidates_for(table, call.call_id, lead->user_id);
  return build_team(call, *lead, matched.front(), candidates, config);
}

std::optional<TeamRecommendation> recommend_for_call(const CallRecord& call,
                                                     std::span<const ResearcherProfile> all_profiles,
                                                     std::span<const CallRecord> all_calls,
                                                     const CorpusVectorModel* model, const TeamingConfig& config) {
  const MatchTable table = MatchTable::compute(all_profiles, all_calls, model, config);
  return recommend_for_call(call, table, config);
}

ConstraintReport explain_change(const TeamRecommendation& team, const TeamChange& change,
                                const ProfileIndex& profiles, const TeamingConfig& config) {
  std::vector<std::string> ids = team.participants();
  auto require_known = [&](const std::string& id) -> const ResearcherProfile* {
    const auto* p = profiles.find(id);
    if (!p) throw Error(ErrorCode::unknown_user, "unknown user " + id);
    return p;
  };
  auto drop = [&](const std::string& id) {
    if (id == team.lead) throw Error(ErrorCode::illegal_change, "the lead cannot be removed");
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw Error(ErrorCode::illegal_change, id + " is not on the team");
    ids.erase(it);
  };
  auto insert = [&](const std::string& id) {
    require_known(id);
    if (team.has_participant(id)) throw Error(ErrorCode::illegal_change, id + " is already on the team");
    ids.push_back(id);
  };
  switch (change.kind) {
    case TeamChange::Kind::add: insert(change.in); break;
    case TeamChange::Kind::remove: drop(change.out); break;
    case TeamChange::Kind::swap:
      drop(change.out);
      insert(change.in);
      break;
  }
  std::vector<const SkillSet*> skill_sets;
  for (const auto& id : ids) skill_sets.push_back(&require_known(id)->skills);
  return check_with_labels(skill_sets, team.proposed_budget, config, ids);
}

}  // namespace teamrec
