#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "teamrec/codec.hpp"
#include "teamrec/evaluation.hpp"
#include "teamrec/pipeline.hpp"
#include "teamrec/service.hpp"
#include "teamrec/taxonomy.hpp"

namespace {

using namespace teamrec;

struct CommonOptions {
  std::string calls;
  std::string roster;
  std::string awards;
  std::string embeddings;
  std::string config;
  std::string reference_date;
  bool json = false;
};

void add_corpus_options(CLI::App* cmd, CommonOptions& o, bool need_calls) {
  auto* calls = cmd->add_option("--calls", o.calls, "call corpus (.rec file or directory)");
  if (need_calls) calls->required();
  cmd->add_option("--roster", o.roster, "researcher roster (TSV)")->required();
  cmd->add_option("--awards", o.awards, "award archive (markup)");
  cmd->add_option("--embeddings", o.embeddings, "imported embeddings (id<TAB>v1,v2,...)");
  cmd->add_option("--config", o.config, "teaming config (JSON)");
  cmd->add_option("--reference-date", o.reference_date, "YYYY-MM-DD used for is_open (default today)");
  cmd->add_flag("--json", o.json, "print JSON instead of a table");
}

CorpusPaths corpus_paths(const CommonOptions& o) {
  CorpusPaths p;
  p.calls = o.calls;
  p.roster = o.roster;
  if (!o.awards.empty()) p.awards = o.awards;
  if (!o.embeddings.empty()) p.embeddings = o.embeddings;
  return p;
}

TeamingConfig load_config(const std::string& path) {
  TeamingConfig config;
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  config = Json::parse(in).get<TeamingConfig>();
  config.validate();
  return config;
}

Date reference_date(const std::string& text) {
  if (text.empty()) return Date::today();
  auto d = Date::parse_iso(text);
  if (!d) throw Error(ErrorCode::invalid_argument, "bad date " + text);
  return *d;
}

int run_ingest(const CommonOptions& o) {
  const Corpus corpus = ingest_corpus(corpus_paths(o), reference_date(o.reference_date));
  if (o.json) {
    std::cout << Json{{"issues", corpus.issues}, {"stats", corpus.stats}}.dump(2) << "\n";
  } else {
    std::cout << render_stats_table(corpus.stats);
    for (const auto& issue : corpus.issues) {
      std::cerr << to_string(issue.code) << "\t" << issue.record_id << "\t" << issue.detail << "\n";
    }
  }
  return 0;
}

int run_match(const CommonOptions& o, const std::string& username, const std::string& strategy_text, int k) {
  TeamingConfig config = load_config(o.config);
  const auto strategy = parse_match_strategy(strategy_text);
  if (!strategy) throw Error(ErrorCode::invalid_argument, "strategy must be fuzzy or vector");
  const auto paths = corpus_paths(o);
  const Corpus corpus = ingest_corpus(paths, reference_date(o.reference_date));
  const CorpusVectorModel model = build_model(corpus, paths);
  const ProfileIndex index(corpus.profiles);
  const ResearcherProfile* user = index.find_username(username);
  if (!user) throw Error(ErrorCode::unknown_user, "unknown or unadmitted user " + username);
  const MatchList list = top_k_calls(*user, corpus.calls, &model, *strategy, k < 0 ? config.k : k, 0);
  if (o.json) {
    std::cout << Json(list).dump(2) << "\n";
  } else {
    std::cout << "rank\tscore\tcall_id\n";
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
      std::cout << i + 1 << "\t" << list.entries[i].score << "\t" << list.entries[i].call_id << "\n";
    }
  }
  return 0;
}

void print_team(const TeamRecommendation& t) {
  std::cout << t.team_id << "  call " << t.call_id << "  budget "
            << (t.proposed_budget ? format_money(*t.proposed_budget) : std::string("unknown")) << "\n";
  std::cout << "  lead   " << t.lead << " (" << t.lead_score.score << ")\n";
  for (const auto& m : t.members) std::cout << "  member " << m.user_id << " (" << m.score.score << ")\n";
  for (const auto& c : t.report.checks) {
    std::cout << "  " << (c.satisfied ? "ok   " : "FAIL ") << to_string(c.id) << ": " << c.explanation << "\n";
  }
}

int run_recommend(const CommonOptions& o, const std::string& username, const std::string& call_id,
                  const std::string& out_path) {
  const TeamingConfig config = load_config(o.config);
  const PipelineOutput output = run_pipeline(corpus_paths(o), config, reference_date(o.reference_date));
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + out_path);
    out << serialize_output(output);
  }
  std::vector<TeamRecommendation> teams;
  if (!call_id.empty()) {
    const MatchTable table =
        MatchTable::compute(output.corpus.profiles, output.corpus.calls, &output.model, config);
    const CallRecord* call = table.find_call(call_id);
    if (!call) throw Error(ErrorCode::unknown_id, "unknown call " + call_id);
    if (auto team = recommend_for_call(*call, table, config)) teams.push_back(*team);
  } else if (!username.empty()) {
    const ProfileIndex index(output.corpus.profiles);
    const ResearcherProfile* user = index.find_username(username);
    if (!user) throw Error(ErrorCode::unknown_user, "unknown or unadmitted user " + username);
    teams = output.recommendations.by_user.at(user->user_id);
  } else {
    for (const auto& [id, team] : output.recommendations.by_team) teams.push_back(team);
  }
  if (o.json) {
    std::cout << Json(teams).dump(2) << "\n";
  } else {
    for (const auto& t : teams) print_team(t);
    if (teams.empty()) std::cout << "no valid team\n";
  }
  return 0;
}

int run_evaluate(const CommonOptions& o, int k, const std::string& strategy_text, const std::string& feedback,
                 int threshold) {
  if (!feedback.empty()) {
    std::ifstream in(feedback);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + feedback);
    std::vector<FeedbackEvent> events;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      events.push_back(Json::parse(line).get<FeedbackEvent>());
      events.back().validate();
    }
    const auto summary = feedback_summary(events, threshold);
    std::cout << (o.json ? Json(summary).dump(2) + "\n" : render_feedback_summary(summary));
    return 0;
  }
  if (o.awards.empty()) throw Error(ErrorCode::invalid_argument, "evaluate needs --awards or --feedback");
  const auto strategy = parse_match_strategy(strategy_text);
  if (!strategy) throw Error(ErrorCode::invalid_argument, "strategy must be fuzzy or vector");
  std::ifstream roster_in(o.roster);
  std::ifstream award_in(o.awards);
  if (!roster_in || !award_in) throw Error(ErrorCode::io_error, "cannot read roster or awards");
  const auto roster = parse_researcher_roster(read_roster(roster_in));
  std::stringstream award_text;
  award_text << award_in.rdbuf();
  const auto awards = parse_award_corpus(award_text.str());
  std::vector<std::string> synopses;
  for (const auto& a : awards.awards) synopses.push_back(a.synopsis);
  const auto model = build_corpus_model(synopses);
  const auto lists = rank_awards_for_pis(awards.awards, roster.admitted, &model, *strategy, k);
  const auto report = hit_rate_at_k(lists, awards.awards, k);
  std::cout << (o.json ? Json(report).dump(2) + "\n" : render_eval_report(report));
  return 0;
}

int run_map(int threshold, const std::string& taxonomy_path, bool json) {
  const Taxonomy taxonomy = load_taxonomy(std::filesystem::path(taxonomy_path));
  std::stringstream text;
  text << std::cin.rdbuf();
  const auto matches = map_text(text.str(), threshold, taxonomy);
  std::cout << (json ? Json(matches).dump(2) + "\n" : render_matches(matches));
  return 0;
}

std::atomic<HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int run_serve(const CommonOptions& o, const std::string& store_dir, const std::string& host, int port) {
  auto store = Store::open(store_dir);
  ServiceOptions options;
  options.config = load_config(o.config);
  if (!o.calls.empty()) options.corpus = corpus_paths(o);
  Service service(*store, options);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Researcher-to-funding-call matching and team recommendation"};
  app.require_subcommand(1);

  CommonOptions ingest_o;
  auto* ingest = app.add_subcommand("ingest", "parse corpora and print extraction statistics");
  add_corpus_options(ingest, ingest_o, true);

  CommonOptions match_o;
  std::string match_user;
  std::string match_strategy = "vector";
  int match_k = -1;
  auto* match = app.add_subcommand("match", "rank calls for one researcher");
  add_corpus_options(match, match_o, true);
  match->add_option("--user", match_user, "username")->required();
  match->add_option("--strategy", match_strategy, "fuzzy or vector");
  match->add_option("-k", match_k, "list length (default from config)");

  CommonOptions rec_o;
  std::string rec_user;
  std::string rec_call;
  std::string rec_out;
  auto* recommend = app.add_subcommand("recommend", "form teams");
  add_corpus_options(recommend, rec_o, true);
  recommend->add_option("--user", rec_user, "teams led by this username");
  recommend->add_option("--call", rec_call, "the team for one call");
  recommend->add_option("--out", rec_out, "write the full pipeline output as JSON");

  CommonOptions eval_o;
  int eval_k = 10;
  int eval_threshold = 7;
  std::string eval_strategy = "vector";
  std::string eval_feedback;
  auto* evaluate = app.add_subcommand("evaluate", "hit@k against awards, or feedback summary");
  evaluate->add_option("--roster", eval_o.roster, "researcher roster (TSV)");
  evaluate->add_option("--awards", eval_o.awards, "award archive (markup)");
  evaluate->add_option("-k", eval_k, "cutoff")->check(CLI::PositiveNumber);
  evaluate->add_option("--strategy", eval_strategy, "fuzzy or vector");
  evaluate->add_option("--feedback", eval_feedback, "feedback events (JSON lines)");
  evaluate->add_option("--threshold", eval_threshold, "Likert threshold");
  evaluate->add_flag("--json", eval_o.json, "print JSON");

  int map_threshold = 50;
  std::string map_taxonomy = TEAMREC_DEFAULT_TAXONOMY;
  bool map_json = false;
  auto* map = app.add_subcommand("map", "map text from standard input to taxonomy codes");
  map->add_option("--threshold", map_threshold, "minimum score 0-100")->check(CLI::Range(0, 100));
  map->add_option("--taxonomy", map_taxonomy, "taxonomy file (code<TAB>term)");
  map->add_flag("--json", map_json, "print JSON");

  CommonOptions serve_o;
  std::string serve_store = "teamrec-store";
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--store", serve_store, "store directory");
  serve->add_option("--host", serve_host, "bind address");
  serve->add_option("--port", serve_port, "port (0 picks one)");
  serve->add_option("--calls", serve_o.calls, "call corpus for /admin/ingest");
  serve->add_option("--roster", serve_o.roster, "roster for /admin/ingest");
  serve->add_option("--awards", serve_o.awards, "awards for /admin/ingest");
  serve->add_option("--embeddings", serve_o.embeddings, "embeddings for /admin/ingest");
  serve->add_option("--config", serve_o.config, "teaming config (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(ingest_o);
    if (*match) return run_match(match_o, match_user, match_strategy, match_k);
    if (*recommend) return run_recommend(rec_o, rec_user, rec_call, rec_out);
    if (*evaluate) return run_evaluate(eval_o, eval_k, eval_strategy, eval_feedback, eval_threshold);
    if (*map) return run_map(map_threshold, map_taxonomy, map_json);
    if (*serve) return run_serve(serve_o, serve_store, serve_host, serve_port);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
