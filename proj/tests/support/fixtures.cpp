#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

#include "teamrec/codec.hpp"

namespace teamrec::testing {

namespace fs = std::filesystem;

fs::path fixture_path(const std::string& name) { return fs::path(TEAMREC_FIXTURE_DIR) / name; }

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CorpusPaths fixture_corpus() {
  CorpusPaths p;
  p.calls = fixture_path("calls");
  p.roster = fixture_path("roster.tsv");
  p.awards = fixture_path("awards.xml");
  return p;
}

Date fixture_date() { return *Date::from_ymd(2014, 1, 1); }

std::vector<ExpectedCall> expected_calls() {
  std::istringstream in(read_fixture("calls_expected.tsv"));
  std::string line;
  std::getline(in, line);  // header
  std::vector<ExpectedCall> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id, title, deadlines, budget;
    std::getline(row, id, '\t');
    std::getline(row, title, '\t');
    std::getline(row, deadlines, '\t');
    std::getline(row, budget, '\t');
    ExpectedCall e{id, title == "1", {}, std::nullopt};
    if (deadlines != "-") {
      std::istringstream ds(deadlines);
      std::string d;
      while (std::getline(ds, d, ',')) e.deadlines.push_back(d);
    }
    if (budget != "-") e.budget = std::stoll(budget);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<FeedbackEvent> fixture_feedback() {
  std::istringstream in(read_fixture("feedback.jsonl"));
  std::vector<FeedbackEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(Json::parse(line).get<FeedbackEvent>());
  }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("teamrec-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace teamrec::testing
