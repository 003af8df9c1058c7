#pragma once

// Corpus ingestion: funding calls, researcher rosters and award archives are
// parsed from local files into validated records, and extraction coverage is
// tallied.
//
// Call container grammar (".rec" files). A file holds one or more records
// separated by a line containing only "%%":
//
//   # comment lines are allowed between records
//   id: NSF-14-504
//   agency: NSF
//   url: https://example.org/call
//   title: optional pre-split title
//   synopsis: optional pre-split synopsis
//     indented lines continue the previous header value
//   keywords: optional; semicolon; separated
//   budget: optional free text scanned like the body
//
//   free-text body until "%%" or end of file
//
// Headers end at the first blank line. Header keys are case-insensitive.
//
// Roster: tab-separated with a header row naming at least username,
// display_name, designation, skills_site and skills_scholar (skills are
// semicolon-separated). Optional columns: user_id (defaults to username) and
// role (participant | administrator).
//
// Award archive: an <awards> root holding <award> elements (or a single
// <award> root) with <number>, <title>, <abstract>, <pi>, <amount>, <year> and
// optional <agency> children.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/common.hpp"
#include "teamrec/markup.hpp"
#include "teamrec/records.hpp"

namespace teamrec {

struct IngestIssue {
  ErrorCode code;
  std::string record_id;  // best available identifier, may be empty
  std::string detail;

  friend bool operator==(const IngestIssue&, const IngestIssue&) = default;
};

// ---- calls ----------------------------------------------------------------

struct RawCallRecord {
  std::map<std::string, std::string> fields;  // lowercase keys
  std::string body;
  std::size_t line = 0;  // first line of the record in its file

  std::optional<std::string> field(std::string_view key) const;
};

std::vector<RawCallRecord> read_call_container(std::istream& in);
std::vector<RawCallRecord> read_call_container(std::string_view text);

struct CallParseResult {
  std::optional<CallRecord> record;  // absent means rejected
  std::vector<IngestIssue> issues;
};

CallParseResult parse_call_record(const RawCallRecord& raw, Date reference_date);

// Program-level total in whole dollars. Currency amounts are "$" followed by
// digits (comma groups allowed, optional decimals) and an optional K, M,
// million or billion multiplier. An amount in the same sentence as a cue
// phrase ("budget", "funding amount", "anticipated funding") is preferred,
// nearest to the cue first, earlier occurrence on ties; otherwise the first
// amount in the text.
std::optional<Money> extract_budget(std::string_view text);

// Parses "1,250,000", "$250000", "1250000.00". Absent if not a positive amount.
std::optional<Money> parse_money(std::string_view text);

struct DeadlineScan {
  std::vector<Date> dates;             // ascending, unique
  std::vector<std::string> malformed;  // matched the pattern but not a real date
};

// Recognizes "Month DD, YYYY" (full or three-letter month names) and
// "MM/DD/YYYY". All matches are kept.
DeadlineScan extract_deadlines(std::string_view text);

struct CallCorpusResult {
  std::vector<CallRecord> calls;
  std::vector<IngestIssue> issues;
  std::int64_t total_records = 0;
  std::int64_t rejected = 0;
};

// Parses every record; later duplicates of a call_id are rejected.
CallCorpusResult parse_call_corpus(const std::vector<RawCallRecord>& raws, Date reference_date);

// ---- researchers ------------------------------------------------------------

inline constexpr std::string_view kSiteSource = "site";
inline constexpr std::string_view kScholarSource = "scholar";

struct RosterRecord {
  std::string user_id;  // empty means "same as username"
  std::string username;
  std::string display_name;
  std::string designation;
  Role role = Role::participant;
  std::vector<std::string> skills_site;
  std::vector<std::string> skills_scholar;
};

std::vector<RosterRecord> read_roster(std::istream& in);
std::vector<RosterRecord> read_roster(std::string_view text);

// Case-insensitive substring deny-list applied to designations.
struct DesignationFilter {
  std::vector<std::string> deny = {"administrative", "coordinator", "adjunct", "emeritus", "staff"};

  bool excludes(std::string_view designation) const;
};

struct RosterFunnel {
  std::int64_t total_extracted = 0;
  std::int64_t invalid = 0;  // no username
  std::int64_t duplicates_rejected = 0;
  std::int64_t removed_by_designation = 0;
  std::int64_t remaining = 0;
  std::int64_t with_research_info = 0;  // admitted
  std::int64_t without_skills = 0;

  friend bool operator==(const RosterFunnel&, const RosterFunnel&) = default;
};

struct RosterResult {
  std::vector<ResearcherProfile> admitted;
  RosterFunnel funnel;
  std::vector<IngestIssue> issues;
};

// Order of elimination: invalid, duplicate username, designation, no skills.
RosterResult parse_researcher_roster(const std::vector<RosterRecord>& records,
                                     const DesignationFilter& filter = {});

// ---- awards -----------------------------------------------------------------

struct AwardParseResult {
  std::optional<AwardRecord> record;
  std::vector<IngestIssue> issues;
};

AwardParseResult parse_award_record(const MarkupElement& award);
AwardParseResult parse_award_record(std::string_view markup);

struct AwardCorpusResult {
  std::vector<AwardRecord> awards;
  std::vector<IngestIssue> issues;
  std::int64_t total_records = 0;
  std::int64_t rejected = 0;
};

AwardCorpusResult parse_award_corpus(std::string_view document);

// ---- statistics -------------------------------------------------------------

struct FieldTally {
  std::string field;
  std::int64_t count = 0;
  std::int64_t total = 0;

  bool empty_denominator() const noexcept { return total == 0; }
  // 100*count/total in tenths of a percent, truncated toward zero. An empty
  // denominator reports 1000 (100.0%).
  int percent_tenths() const noexcept;
  std::string percent_text() const;  // "99.1"

  friend bool operator==(const FieldTally&, const FieldTally&) = default;
};

struct ExtractionStats {
  std::vector<FieldTally> fields;  // fixed row order, see ingestion_report
  RosterFunnel funnel;

  const FieldTally* field(std::string_view name) const;
  // Associative merge of two reports over disjoint inputs.
  ExtractionStats& merge(const ExtractionStats& other);

  friend bool operator==(const ExtractionStats&, const ExtractionStats&) = default;
};

// Rows: RFP, Title, Deadline, Budget, Synopsis/Keywords (over all call
// records read), Users, Users/Research (over roster records left after the
// designation filter), Awards.
ExtractionStats ingestion_report(const CallCorpusResult& calls, const RosterResult& roster,
                                 const AwardCorpusResult& awards);

std::string render_stats_table(const ExtractionStats& stats);

}  // namespace teamrec
