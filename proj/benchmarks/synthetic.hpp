#pragma once

#include <random>
#include <string>
#include <vector>

#include "teamrec/records.hpp"
#include "teamrec/text.hpp"

namespace teamrec::bench {

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "learning", "robotics", "databases", "cryptography", "hydrology", "grid",     "epidemiology", "compilers",
      "genomics", "vision",   "ocean",     "graphs",       "security",  "sensors", "climate",      "materials",
      "networks", "privacy",  "energy",    "imaging",      "language",  "storage", "quantum",      "water"};
  return words;
}

inline std::string sentence(std::mt19937_64& rng, int words) {
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
  std::string out;
  for (int i = 0; i < words; ++i) out += (i ? " " : "") + vocabulary()[pick(rng)];
  return out;
}

inline std::vector<CallRecord> make_calls(std::mt19937_64& rng, int n, int words) {
  std::vector<CallRecord> calls(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    calls[static_cast<std::size_t>(i)].call_id = "C" + std::to_string(i);
    calls[static_cast<std::size_t>(i)].synopsis = sentence(rng, words);
    calls[static_cast<std::size_t>(i)].budget_total = Money{1'000'000};
  }
  return calls;
}

inline ResearcherProfile make_user(std::mt19937_64& rng, const std::string& id, int skills) {
  ResearcherProfile p;
  p.user_id = id;
  p.username = id;
  std::vector<std::string> raw;
  for (int i = 0; i < skills; ++i) raw.push_back(sentence(rng, 2));
  p.raw_skills_by_source = {{"site", raw}};
  p.skills = build_skill_set(p.raw_skills_by_source);
  return p;
}

}  // namespace teamrec::bench
