#include "teamrec/codec.hpp"

namespace teamrec {

namespace {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::parse_error, std::string("missing field ") + key);
  if (j.at(key).is_null()) return std::nullopt;
  return json_field<T>(j, key);
}

template <typename Enum, typename Parse>
Enum enum_field(const Json& j, const char* key, Parse parse) {
  const auto text = json_field<std::string>(j, key);
  const std::optional<Enum> value = parse(text);
  if (!value) throw Error(ErrorCode::parse_error, std::string("bad value for ") + key + ": " + text);
  return *value;
}

std::optional<MatchFlag> parse_match_flag(std::string_view text) {
  for (auto f : {MatchFlag::none, MatchFlag::empty_skill_set, MatchFlag::empty_text, MatchFlag::out_of_vocabulary,
                 MatchFlag::zero_vector}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::optional<ConstraintId> parse_constraint_id(std::string_view text) {
  for (auto c : {ConstraintId::size_cap, ConstraintId::budget_floor, ConstraintId::unique_skill}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

}  // namespace

void to_json(Json& j, const Money& v) { j = v.dollars; }
void from_json(const Json& j, Money& v) {
  if (!j.is_number_integer()) throw Error(ErrorCode::parse_error, "money must be an integer");
  v.dollars = j.get<std::int64_t>();
}

void to_json(Json& j, const Date& v) { j = v.iso(); }
void from_json(const Json& j, Date& v) {
  if (!j.is_string()) throw Error(ErrorCode::parse_error, "date must be a string");
  const auto d = Date::parse_iso(j.get<std::string>());
  if (!d) throw Error(ErrorCode::parse_error, "bad date " + j.get<std::string>());
  v = *d;
}

void to_json(Json& j, const Skill& v) { j = Json{{"canon", v.canon}, {"display", v.display}}; }
void from_json(const Json& j, Skill& v) {
  v.display = json_field<std::string>(j, "display");
  v.canon = json_field<Tokens>(j, "canon");
}

void to_json(Json& j, const SkillSet& v) { j = v.skills(); }
void from_json(const Json& j, SkillSet& v) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, "skill set must be an array");
  v = SkillSet::from_skills(j.get<std::vector<Skill>>());
}

void to_json(Json& j, const CallRecord& v) {
  j = Json{{"agency_id", v.agency_id},
           {"budget_total", optional_json(v.budget_total)},
           {"call_id", v.call_id},
           {"deadlines", v.deadlines},
           {"is_open", v.is_open},
           {"keywords", v.keywords},
           {"synopsis", v.synopsis},
           {"title", optional_json(v.title)},
           {"url", v.url}};
}
void from_json(const Json& j, CallRecord& v) {
  v.call_id = json_field<std::string>(j, "call_id");
  v.agency_id = json_field<std::string>(j, "agency_id");
  v.url = json_field<std::string>(j, "url");
  v.title = optional_field<std::string>(j, "title");
  v.synopsis = json_field<std::string>(j, "synopsis");
  v.deadlines = json_field<std::vector<Date>>(j, "deadlines");
  v.budget_total = optional_field<Money>(j, "budget_total");
  v.keywords = json_field<std::vector<std::string>>(j, "keywords");
  v.is_open = json_field<bool>(j, "is_open");
}

void to_json(Json& j, const ResearcherProfile& v) {
  Json sources = Json::array();
  for (const auto& [source, skills] : v.raw_skills_by_source) sources.push_back({{"skills", skills}, {"source", source}});
  j = Json{{"designation", v.designation},
           {"display_name", v.display_name},
           {"has_scholar_profile", v.has_scholar_profile},
           {"raw_skills_by_source", std::move(sources)},
           {"role", to_string(v.role)},
           {"skills", v.skills},
           {"user_id", v.user_id},
           {"username", v.username}};
}
void from_json(const Json& j, ResearcherProfile& v) {
  v.user_id = json_field<std::string>(j, "user_id");
  v.username = json_field<std::string>(j, "username");
  v.display_name = json_field<std::string>(j, "display_name");
  v.designation = json_field<std::string>(j, "designation");
  v.role = enum_field<Role>(j, "role", parse_role);
  v.raw_skills_by_source.clear();
  for (const auto& s : json_field<Json>(j, "raw_skills_by_source")) {
    v.raw_skills_by_source.emplace_back(json_field<std::string>(s, "source"),
                                        json_field<std::vector<std::string>>(s, "skills"));
  }
  v.skills = json_field<SkillSet>(j, "skills");
  v.has_scholar_profile = json_field<bool>(j, "has_scholar_profile");
}

void to_json(Json& j, const AwardRecord& v) {
  j = Json{{"agency_id", v.agency_id}, {"amount", optional_json(v.amount)}, {"award_number", v.award_number},
           {"pi_username", v.pi_username}, {"synopsis", v.synopsis},        {"title", v.title},
           {"year", v.year}};
}
void from_json(const Json& j, AwardRecord& v) {
  v.award_number = json_field<std::string>(j, "award_number");
  v.agency_id = json_field<std::string>(j, "agency_id");
  v.title = json_field<std::string>(j, "title");
  v.synopsis = json_field<std::string>(j, "synopsis");
  v.pi_username = json_field<std::string>(j, "pi_username");
  v.amount = optional_field<Money>(j, "amount");
  v.year = json_field<int>(j, "year");
}

void to_json(Json& j, const MatchScore& v) {
  j = Json{{"call_id", v.call_id},
           {"flag", to_string(v.flag)},
           {"score", v.score},
           {"strategy", to_string(v.strategy)},
           {"user_id", v.user_id}};
}
void from_json(const Json& j, MatchScore& v) {
  v.user_id = json_field<std::string>(j, "user_id");
  v.call_id = json_field<std::string>(j, "call_id");
  v.strategy = enum_field<MatchStrategy>(j, "strategy", parse_match_strategy);
  v.score = json_field<int>(j, "score");
  v.flag = enum_field<MatchFlag>(j, "flag", parse_match_flag);
}

void to_json(Json& j, const MatchList& v) { j = Json{{"entries", v.entries}, {"k", v.k}, {"user_id", v.user_id}}; }
void from_json(const Json& j, MatchList& v) {
  v.user_id = json_field<std::string>(j, "user_id");
  v.entries = json_field<std::vector<MatchScore>>(j, "entries");
  v.k = json_field<int>(j, "k");
}

Json model_to_json(const CorpusVectorModel& model) {
  return Json{{"corpus_size", model.corpus_size()},
              {"document_frequencies", model.document_frequencies()},
              {"embeddings", model.embeddings()},
              {"format_version", CorpusVectorModel::kFormatVersion},
              {"source", model.source() == CorpusVectorModel::Source::built ? "built" : "imported"},
              {"vocabulary", model.vocabulary()}};
}

CorpusVectorModel model_from_json(const Json& j) {
  const int version = json_field<int>(j, "format_version");
  if (version != CorpusVectorModel::kFormatVersion) {
    throw Error(ErrorCode::version_mismatch, "model format version " + std::to_string(version));
  }
  const auto source_text = json_field<std::string>(j, "source");
  CorpusVectorModel::Source source;
  if (source_text == "built") {
    source = CorpusVectorModel::Source::built;
  } else if (source_text == "imported") {
    source = CorpusVectorModel::Source::imported;
  } else {
    throw Error(ErrorCode::parse_error, "bad model source " + source_text);
  }
  return CorpusVectorModel::from_parts(source, json_field<std::int64_t>(j, "corpus_size"),
                                       json_field<std::vector<std::string>>(j, "vocabulary"),
                                       json_field<std::vector<std::int64_t>>(j, "document_frequencies"),
                                       json_field<std::map<std::string, std::vector<double>>>(j, "embeddings"));
}

void to_json(Json& j, const TeamingConfig& v) {
  j = Json{{"allow_large_teams", v.allow_large_teams},
           {"hard_ceiling", v.hard_ceiling},
           {"k", v.k},
           {"max_recs_per_user_per_period", optional_json(v.max_recs_per_user_per_period)},
           {"page_size", v.page_size},
           {"per_participant_floor", v.per_participant_floor},
           {"relevance_floor", v.relevance_floor},
           {"strategy", to_string(v.strategy)},
           {"team_cap", v.team_cap}};
}

// Missing keys keep their defaults so partial config files work.
void from_json(const Json& j, TeamingConfig& v) {
  if (!j.is_object()) throw Error(ErrorCode::parse_error, "config must be an object");
  if (j.contains("k")) v.k = json_field<int>(j, "k");
  if (j.contains("team_cap")) v.team_cap = json_field<int>(j, "team_cap");
  if (j.contains("per_participant_floor")) v.per_participant_floor = json_field<Money>(j, "per_participant_floor");
  if (j.contains("allow_large_teams")) v.allow_large_teams = json_field<bool>(j, "allow_large_teams");
  if (j.contains("hard_ceiling")) v.hard_ceiling = json_field<int>(j, "hard_ceiling");
  if (j.contains("relevance_floor")) v.relevance_floor = json_field<int>(j, "relevance_floor");
  if (j.contains("page_size")) v.page_size = json_field<int>(j, "page_size");
  if (j.contains("max_recs_per_user_per_period")) {
    v.max_recs_per_user_per_period = optional_field<int>(j, "max_recs_per_user_per_period");
  }
  if (j.contains("strategy")) v.strategy = enum_field<MatchStrategy>(j, "strategy", parse_match_strategy);
}

void to_json(Json& j, const ConstraintCheck& v) {
  j = Json{{"explanation", v.explanation}, {"id", to_string(v.id)}, {"satisfied", v.satisfied}};
}
void from_json(const Json& j, ConstraintCheck& v) {
  v.id = enum_field<ConstraintId>(j, "id", parse_constraint_id);
  v.satisfied = json_field<bool>(j, "satisfied");
  v.explanation = json_field<std::string>(j, "explanation");
}

void to_json(Json& j, const ConstraintReport& v) {
  j = Json{{"all_satisfied", v.all_satisfied()}, {"checks", v.checks}};
}
void from_json(const Json& j, ConstraintReport& v) {
  const auto checks = json_field<std::vector<ConstraintCheck>>(j, "checks");
  if (checks.size() != v.checks.size()) throw Error(ErrorCode::parse_error, "report needs three checks");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (static_cast<std::size_t>(checks[i].id) != i) throw Error(ErrorCode::parse_error, "checks out of order");
    v.checks[i] = checks[i];
  }
}

void to_json(Json& j, const TeamMember& v) { j = Json{{"score", v.score}, {"user_id", v.user_id}}; }
void from_json(const Json& j, TeamMember& v) {
  v.user_id = json_field<std::string>(j, "user_id");
  v.score = json_field<MatchScore>(j, "score");
}

void to_json(Json& j, const TeamRecommendation& v) {
  j = Json{{"call_id", v.call_id},
           {"lead", v.lead},
           {"lead_score", v.lead_score},
           {"members", v.members},
           {"per_member_allocation", optional_json(v.per_member_allocation)},
           {"proposed_budget", optional_json(v.proposed_budget)},
           {"report", v.report},
           {"team_id", v.team_id}};
}
void from_json(const Json& j, TeamRecommendation& v) {
  v.team_id = json_field<std::string>(j, "team_id");
  v.call_id = json_field<std::string>(j, "call_id");
  v.lead = json_field<std::string>(j, "lead");
  v.lead_score = json_field<MatchScore>(j, "lead_score");
  v.members = json_field<std::vector<TeamMember>>(j, "members");
  v.proposed_budget = optional_field<Money>(j, "proposed_budget");
  v.per_member_allocation = optional_field<Money>(j, "per_member_allocation");
  v.report = json_field<ConstraintReport>(j, "report");
}

void to_json(Json& j, const WorkflowState& v) {
  Json responses = Json::object();
  for (const auto& [user, r] : v.responses) responses[user] = to_string(r);
  j = Json{{"expires_after", optional_json(v.expires_after)},
           {"participants", v.participants},
           {"responses", std::move(responses)},
           {"state", to_string(v.state)},
           {"team_id", v.team_id},
           {"version", v.version}};
}
void from_json(const Json& j, WorkflowState& v) {
  v.team_id = json_field<std::string>(j, "team_id");
  v.state = enum_field<TeamState>(j, "state", parse_team_state);
  v.participants = json_field<std::vector<std::string>>(j, "participants");
  v.responses.clear();
  for (const auto& [user, r] : json_field<std::map<std::string, std::string>>(j, "responses")) {
    const auto parsed = parse_response(r);
    if (!parsed) throw Error(ErrorCode::parse_error, "bad response " + r);
    v.responses.emplace(user, *parsed);
  }
  v.expires_after = optional_field<Date>(j, "expires_after");
  v.version = json_field<std::int64_t>(j, "version");
}

void to_json(Json& j, const FeedbackEvent& v) {
  j = Json{{"call_id", v.call_id},
           {"period_id", v.period_id},
           {"rating", v.rating},
           {"timestamp", v.timestamp},
           {"user_id", v.user_id}};
}
void from_json(const Json& j, FeedbackEvent& v) {
  v.user_id = json_field<std::string>(j, "user_id");
  v.call_id = json_field<std::string>(j, "call_id");
  v.rating = json_field<int>(j, "rating");
  v.period_id = j.contains("period_id") ? json_field<std::string>(j, "period_id") : std::string();
  v.timestamp = j.contains("timestamp") ? json_field<std::string>(j, "timestamp") : std::string();
}

void to_json(Json& j, const FieldTally& v) {
  j = Json{{"count", v.count},
           {"empty_denominator", v.empty_denominator()},
           {"field", v.field},
           {"percent", v.percent_text()},
           {"total", v.total}};
}

void to_json(Json& j, const RosterFunnel& v) {
  j = Json{{"duplicates_rejected", v.duplicates_rejected},
           {"invalid", v.invalid},
           {"remaining", v.remaining},
           {"removed_by_designation", v.removed_by_designation},
           {"total_extracted", v.total_extracted},
           {"with_research_info", v.with_research_info},
           {"without_skills", v.without_skills}};
}

void to_json(Json& j, const ExtractionStats& v) { j = Json{{"fields", v.fields}, {"funnel", v.funnel}}; }

void to_json(Json& j, const IngestIssue& v) {
  j = Json{{"code", to_string(v.code)}, {"detail", v.detail}, {"record_id", v.record_id}};
}

void to_json(Json& j, const PiResult& v) {
  j = Json{{"actual_awards", v.actual_awards},
           {"has_list", v.has_list},
           {"hit", v.hit},
           {"matched_awards", v.matched_awards},
           {"username", v.username}};
}

void to_json(Json& j, const EvalReport& v) {
  j = Json{{"award_hit_rate", v.award_hit_rate},
           {"awards_found", v.awards_found},
           {"awards_total", v.awards_total},
           {"hit_rate", v.hit_rate},
           {"hits", v.hits},
           {"k", v.k},
           {"per_user", v.per_user},
           {"pis_without_lists", v.pis_without_lists},
           {"users_evaluated", v.users_evaluated}};
}

void to_json(Json& j, const UserFeedback& v) {
  j = Json{{"at_or_above", v.at_or_above}, {"below_threshold_calls", v.below_threshold_calls}, {"total", v.total}};
}

void to_json(Json& j, const FeedbackSummary& v) {
  j = Json{{"at_or_above", v.at_or_above}, {"per_user", v.per_user}, {"threshold", v.threshold}, {"total", v.total}};
}

void to_json(Json& j, const TaxonomyMatch& v) {
  j = Json{{"code", v.code}, {"score", v.score}, {"term", v.term}};
}

std::string canonical_dump(const Json& j) { return j.dump() + "\n"; }

}  // namespace teamrec
