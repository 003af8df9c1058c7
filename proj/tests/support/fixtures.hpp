#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "teamrec/common.hpp"
#include "teamrec/evaluation.hpp"
#include "teamrec/pipeline.hpp"

namespace teamrec::testing {

std::filesystem::path fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);

// Calls, roster and awards of the bundled fixture corpus.
CorpusPaths fixture_corpus();
// Reference date the fixture's is_open annotations assume.
Date fixture_date();

struct ExpectedCall {
  std::string call_id;
  bool has_title = false;
  std::vector<std::string> deadlines;  // ISO dates
  std::optional<long long> budget;
};

std::vector<ExpectedCall> expected_calls();

std::vector<FeedbackEvent> fixture_feedback();

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace teamrec::testing
