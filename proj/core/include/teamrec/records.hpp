#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/common.hpp"
#include "teamrec/text.hpp"

namespace teamrec {

// One funding call (request for proposals).
struct CallRecord {
  std::string call_id;
  std::string agency_id;
  std::string url;
  std::optional<std::string> title;
  std::string synopsis;
  std::vector<Date> deadlines;  // ascending, unique
  std::optional<Money> budget_total;
  std::vector<std::string> keywords;
  bool is_open = false;

  // Earliest deadline on or after `reference`, if any.
  std::optional<Date> next_deadline(Date reference) const;
  std::optional<Date> last_deadline() const;

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

enum class Role { participant, administrator };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct ResearcherProfile {
  std::string user_id;
  std::string username;
  std::string display_name;
  std::string designation;
  Role role = Role::participant;
  SourceSkills raw_skills_by_source;
  SkillSet skills;
  bool has_scholar_profile = false;

  friend bool operator==(const ResearcherProfile&, const ResearcherProfile&) = default;
};

struct AwardRecord {
  std::string award_number;
  std::string agency_id;
  std::string title;
  std::string synopsis;
  std::string pi_username;
  std::optional<Money> amount;
  int year = 0;

  friend bool operator==(const AwardRecord&, const AwardRecord&) = default;
};

}  // namespace teamrec
