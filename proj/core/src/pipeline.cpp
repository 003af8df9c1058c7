#include "teamrec/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace teamrec {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> call_files(const fs::path& path) {
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rec") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

Corpus ingest_corpus(const CorpusPaths& paths, Date reference_date) {
  std::vector<RawCallRecord> raws;
  for (const auto& file : call_files(paths.calls)) {
    auto records = read_call_container(slurp(file));
    raws.insert(raws.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
  }
  CallCorpusResult calls = parse_call_corpus(raws, reference_date);
  RosterResult roster = parse_researcher_roster(read_roster(slurp(paths.roster)));
  AwardCorpusResult awards;
  if (paths.awards) awards = parse_award_corpus(slurp(*paths.awards));

  Corpus corpus;
  corpus.stats = ingestion_report(calls, roster, awards);
  corpus.issues = calls.issues;
  corpus.issues.insert(corpus.issues.end(), roster.issues.begin(), roster.issues.end());
  corpus.issues.insert(corpus.issues.end(), awards.issues.begin(), awards.issues.end());
  corpus.calls = std::move(calls.calls);
  corpus.profiles = std::move(roster.admitted);
  corpus.awards = std::move(awards.awards);
  return corpus;
}

CorpusVectorModel build_model(const Corpus& corpus, const CorpusPaths& paths) {
  if (paths.embeddings) {
    std::ifstream in(*paths.embeddings);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + paths.embeddings->string());
    return import_embeddings(in);
  }
  std::vector<std::string> synopses;
  synopses.reserve(corpus.calls.size());
  for (const auto& c : corpus.calls) synopses.push_back(c.synopsis);
  return build_corpus_model(synopses);
}

RecommendationSet run_recommendations(const Corpus& corpus, const CorpusVectorModel& model,
                                      const TeamingConfig& config) {
  const MatchTable table = MatchTable::compute(corpus.profiles, corpus.calls, &model, config);
  RecommendationSet out;
  for (const auto& user : corpus.profiles) {
    auto recs = recommend_for_user(user, table, config);
    for (const auto& r : recs) out.by_team.emplace(r.team_id, r);
    out.by_user.emplace(user.user_id, std::move(recs));
  }
  return out;
}

PipelineOutput run_pipeline(const CorpusPaths& paths, const TeamingConfig& config, Date reference_date) {
  config.validate();
  Corpus corpus = ingest_corpus(paths, reference_date);
  CorpusVectorModel model = build_model(corpus, paths);
  RecommendationSet recs = run_recommendations(corpus, model, config);
  return {std::move(corpus), std::move(model), std::move(recs)};
}

std::string serialize_output(const PipelineOutput& output) {
  Json by_user = Json::object();
  for (const auto& [user, recs] : output.recommendations.by_user) by_user[user] = recs;
  const Json j{{"awards", output.corpus.awards},
               {"calls", output.corpus.calls},
               {"issues", output.corpus.issues},
               {"model", model_to_json(output.model)},
               {"profiles", output.corpus.profiles},
               {"recommendations", std::move(by_user)},
               {"stats", output.corpus.stats}};
  return canonical_dump(j);
}

PublishSummary publish(Store& store, const PipelineOutput& output) {
  PublishSummary summary;
  for (const auto& c : output.corpus.calls) store.put(kinds::calls, c.call_id, c);
  for (const auto& p : output.corpus.profiles) store.put(kinds::profiles, p.user_id, p);
  for (const auto& a : output.corpus.awards) store.put(kinds::awards, a.award_number, a);
  store.put(kinds::models, "active", model_to_json(output.model));
  summary.calls = output.corpus.calls.size();
  summary.profiles = output.corpus.profiles.size();
  summary.awards = output.corpus.awards.size();

  std::map<std::string_view, const CallRecord*> calls;
  for (const auto& c : output.corpus.calls) calls.emplace(c.call_id, &c);
  for (const auto& [team_id, team] : output.recommendations.by_team) {
    store.put(kinds::recommendations, team_id, team);
    ++summary.teams;
    if (!store.get(kinds::workflow, team_id)) {
      auto it = calls.find(team.call_id);
      store.put(kinds::workflow, team_id, start_workflow(team, it == calls.end() ? nullptr : it->second));
      ++summary.new_workflows;
    }
  }
  for (const auto& [user, recs] : output.recommendations.by_user) {
    Json ids = Json::array();
    for (const auto& r : recs) ids.push_back(r.team_id);
    store.put(kinds::user_index, user, Json{{"team_ids", std::move(ids)}, {"user_id", user}});
  }
  return summary;
}

}  // namespace teamrec
