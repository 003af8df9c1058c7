#pragma once

// JSON record serialization shared by the store, the service and the CLI.
//
// Objects are written with keys in lexicographic order. Money is an integer
// number of dollars, dates are "YYYY-MM-DD", enums are their lowercase names
// and absent optionals are null. from_json throws Error(parse_error) on a
// missing or mistyped field.

#include <nlohmann/json.hpp>

#include "teamrec/common.hpp"
#include "teamrec/evaluation.hpp"
#include "teamrec/ingestion.hpp"
#include "teamrec/matching.hpp"
#include "teamrec/records.hpp"
#include "teamrec/taxonomy.hpp"
#include "teamrec/teaming.hpp"
#include "teamrec/workflow.hpp"

namespace teamrec {

using Json = nlohmann::json;

void to_json(Json& j, const Money& v);
void from_json(const Json& j, Money& v);
void to_json(Json& j, const Date& v);
void from_json(const Json& j, Date& v);

void to_json(Json& j, const Skill& v);
void from_json(const Json& j, Skill& v);
void to_json(Json& j, const SkillSet& v);
void from_json(const Json& j, SkillSet& v);

void to_json(Json& j, const CallRecord& v);
void from_json(const Json& j, CallRecord& v);
void to_json(Json& j, const ResearcherProfile& v);
void from_json(const Json& j, ResearcherProfile& v);
void to_json(Json& j, const AwardRecord& v);
void from_json(const Json& j, AwardRecord& v);

void to_json(Json& j, const MatchScore& v);
void from_json(const Json& j, MatchScore& v);
void to_json(Json& j, const MatchList& v);
void from_json(const Json& j, MatchList& v);

// {"format_version", "source", "corpus_size", "vocabulary",
//  "document_frequencies", "embeddings"}; Error(version_mismatch) on an
// unknown format_version.
Json model_to_json(const CorpusVectorModel& model);
CorpusVectorModel model_from_json(const Json& j);

void to_json(Json& j, const TeamingConfig& v);
void from_json(const Json& j, TeamingConfig& v);
void to_json(Json& j, const ConstraintCheck& v);
void from_json(const Json& j, ConstraintCheck& v);
void to_json(Json& j, const ConstraintReport& v);
void from_json(const Json& j, ConstraintReport& v);
void to_json(Json& j, const TeamMember& v);
void from_json(const Json& j, TeamMember& v);
void to_json(Json& j, const TeamRecommendation& v);
void from_json(const Json& j, TeamRecommendation& v);

void to_json(Json& j, const WorkflowState& v);
void from_json(const Json& j, WorkflowState& v);
void to_json(Json& j, const FeedbackEvent& v);
void from_json(const Json& j, FeedbackEvent& v);

void to_json(Json& j, const FieldTally& v);
void to_json(Json& j, const RosterFunnel& v);
void to_json(Json& j, const ExtractionStats& v);
void to_json(Json& j, const IngestIssue& v);
void to_json(Json& j, const PiResult& v);
void to_json(Json& j, const EvalReport& v);
void to_json(Json& j, const UserFeedback& v);
void to_json(Json& j, const FeedbackSummary& v);
void to_json(Json& j, const TaxonomyMatch& v);

// Field access that reports the key path in Error(parse_error).
template <typename T>
T json_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::parse_error, std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("bad field ") + key + ": " + e.what());
  }
}

// Compact, key-sorted text with a trailing newline.
std::string canonical_dump(const Json& j);

}  // namespace teamrec
