#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/rational.hpp>

namespace teamrec::testing {

CanonSet canon_set(const SkillSet& skills) {
  CanonSet out;
  for (const auto& s : skills.skills()) out.insert(s.canon);
  return out;
}

int oracle_size_cap(std::optional<Money> budget, const TeamingConfig& config) {
  if (!budget) return config.team_cap;
  const long long funded = budget->dollars / config.per_participant_floor.dollars;
  if (config.allow_large_teams && funded > config.team_cap) {
    return static_cast<int>(std::min<long long>(funded, config.hard_ceiling));
  }
  return static_cast<int>(std::min<long long>(config.team_cap, funded));
}

bool oracle_unique_skill(const std::vector<CanonSet>& team) {
  for (std::size_t i = 0; i < team.size(); ++i) {
    CanonSet others;
    for (std::size_t j = 0; j < team.size(); ++j) {
      if (j != i) others.insert(team[j].begin(), team[j].end());
    }
    bool has_own = false;
    for (const auto& c : team[i]) {
      if (!others.count(c)) has_own = true;
    }
    if (!has_own) return false;
  }
  return true;
}

OracleVerdict oracle_check(const std::vector<CanonSet>& team, std::optional<Money> budget,
                           const TeamingConfig& config) {
  OracleVerdict v;
  const auto n = static_cast<long long>(team.size());
  v.size_ok = n <= oracle_size_cap(budget, config);
  v.budget_ok = !budget || boost::rational<long long>(budget->dollars, n) >= config.per_participant_floor.dollars;
  v.unique_ok = oracle_unique_skill(team);
  return v;
}

std::vector<std::string> oracle_greedy(const CanonSet& lead, std::vector<OracleCandidate> candidates,
                                       std::optional<Money> budget, const TeamingConfig& config) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::make_pair(-a.score, a.user_id) < std::make_pair(-b.score, b.user_id);
  });
  const int cap = oracle_size_cap(budget, config);
  std::vector<CanonSet> team{lead};
  std::vector<std::string> members;
  for (const auto& c : candidates) {
    if (static_cast<int>(team.size()) >= cap) break;
    auto tentative = team;
    tentative.push_back(c.canons);
    if (oracle_check(tentative, budget, config).valid()) {
      team = std::move(tentative);
      members.push_back(c.user_id);
    }
  }
  return members;
}

int oracle_fuzzy(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  long long common = 0;
  for (const auto& t : a) common += b.count(t);
  const long long na = static_cast<long long>(a.size());
  const long long nb = static_cast<long long>(b.size());
  // |A ∩ B| / (2ab / (a + b))
  const boost::rational<long long> sim = boost::rational<long long>(common) / boost::rational<long long>(2 * na * nb, na + nb);
  const boost::rational<long long> scaled = sim * 100 + boost::rational<long long>(1, 2);
  int score = static_cast<int>(scaled.numerator() / scaled.denominator());
  if (score >= 100 && a != b) score = 99;
  return score;
}

std::optional<int> oracle_vector(const Tokens& a, const Tokens& b, const std::vector<Tokens>& corpus) {
  std::map<std::string, int> df;
  for (const auto& doc : corpus) {
    for (const auto& t : std::set<std::string>(doc.begin(), doc.end())) ++df[t];
  }
  const double n = static_cast<double>(corpus.size());
  auto weights = [&](const Tokens& tokens) {
    std::map<std::string, double> tf;
    for (const auto& t : tokens) {
      if (df.count(t)) tf[t] += 1.0;
    }
    std::map<std::string, double> w;
    for (const auto& [t, count] : tf) w[t] = count * std::log(1.0 + n / df[t]);
    return std::make_pair(tf, w);
  };
  const auto [tf_a, wa] = weights(a);
  const auto [tf_b, wb] = weights(b);
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, v] : wa) {
    na += v * v;
    if (auto it = wb.find(t); it != wb.end()) dot += v * it->second;
  }
  for (const auto& [t, v] : wb) nb += v * v;
  if (na == 0 || nb == 0) return 0;
  const double cosine = std::max(0.0, dot / std::sqrt(na * nb));
  const double scaled = 100.0 * cosine;
  const double frac = scaled - std::floor(scaled);
  if (std::fabs(frac - 0.5) < 1e-9) return std::nullopt;
  int score = static_cast<int>(std::floor(scaled + 0.5));
  if (score >= 100) {
    // Proportional raw counts score 100, anything else is capped.
    bool proportional = tf_a.size() == tf_b.size();
    if (proportional) {
      const double ratio = tf_a.begin()->second / tf_b.begin()->second;
      for (const auto& [t, c] : tf_a) {
        auto it = tf_b.find(t);
        if (it == tf_b.end() || std::fabs(c / it->second - ratio) > 1e-12) proportional = false;
      }
    }
    score = proportional ? 100 : 99;
  }
  return score;
}

std::vector<std::pair<std::string, int>> oracle_top_k(std::map<std::string, int> scores, int k, int floor) {
  std::vector<std::pair<std::string, int>> all(scores.begin(), scores.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::pair<std::string, int>> out;
  for (const auto& e : all) {
    if (e.second >= floor && static_cast<int>(out.size()) < k) out.push_back(e);
  }
  return out;
}

ResearcherProfile make_profile(const std::string& user_id, const std::vector<std::string>& skills) {
  ResearcherProfile p;
  p.user_id = user_id;
  p.username = user_id;
  p.display_name = user_id;
  p.designation = "Professor";
  p.raw_skills_by_source = {{"site", skills}};
  p.skills = build_skill_set(p.raw_skills_by_source);
  return p;
}

TeamInstance random_team_instance(std::mt19937_64& rng, int max_candidates) {
  static const std::vector<std::string> kPool = {
      "machine learning", "robotics",      "databases",      "cryptography", "hydrology",
      "smart grid",       "epidemiology",  "compilers",      "bioinformatics", "computer vision",
      "quantum computing", "data mining"};
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto skills = [&] {
    std::vector<std::string> out;
    const int n = uniform(1, 3);
    for (int i = 0; i < n; ++i) out.push_back(kPool[static_cast<std::size_t>(uniform(0, static_cast<int>(kPool.size()) - 1))]);
    return out;
  };

  TeamInstance inst;
  inst.config.team_cap = uniform(2, 6);
  inst.config.allow_large_teams = uniform(0, 3) == 0;
  inst.config.hard_ceiling = inst.config.team_cap + uniform(0, 4);
  inst.call.call_id = "C" + std::to_string(uniform(0, 999));
  inst.call.synopsis = "synthetic call";
  if (uniform(0, 3) != 0) inst.call.budget_total = Money{uniform(4, 70) * 10'000LL};

  inst.lead = make_profile("lead", skills());
  inst.lead_score = {"lead", inst.call.call_id, MatchStrategy::fuzzy, uniform(40, 100), MatchFlag::none};
  const int n = uniform(0, max_candidates);
  for (int i = 0; i < n; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "u%02d", uniform(0, 99));
    if (std::any_of(inst.candidates.begin(), inst.candidates.end(), [&](const auto& p) { return p.user_id == id; })) {
      continue;
    }
    inst.candidates.push_back(make_profile(id, skills()));
    // A narrow score range makes ties common.
    inst.scores.push_back({id, inst.call.call_id, MatchStrategy::fuzzy, uniform(40, 48), MatchFlag::none});
  }
  return inst;
}

}  // namespace teamrec::testing
