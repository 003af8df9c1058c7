#pragma once

// End-to-end batch: read corpus files, build the model, form teams, and
// publish everything to a Store.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teamrec/codec.hpp"
#include "teamrec/ingestion.hpp"
#include "teamrec/matching.hpp"
#include "teamrec/store.hpp"
#include "teamrec/teaming.hpp"

namespace teamrec {

struct CorpusPaths {
  std::filesystem::path calls;   // a .rec file or a directory of them
  std::filesystem::path roster;  // TSV
  std::optional<std::filesystem::path> awards;      // award markup
  std::optional<std::filesystem::path> embeddings;  // replaces the built model

  friend bool operator==(const CorpusPaths&, const CorpusPaths&) = default;
};

struct Corpus {
  std::vector<CallRecord> calls;
  std::vector<ResearcherProfile> profiles;  // admitted only
  std::vector<AwardRecord> awards;
  ExtractionStats stats;
  std::vector<IngestIssue> issues;
};

// Directories are read in file-name order. Throws Error(io_error) for
// unreadable paths.
Corpus ingest_corpus(const CorpusPaths& paths, Date reference_date);

CorpusVectorModel build_model(const Corpus& corpus, const CorpusPaths& paths);

struct RecommendationSet {
  std::map<std::string, std::vector<TeamRecommendation>> by_user;  // every admitted user, maybe empty
  std::map<std::string, TeamRecommendation> by_team;
};

RecommendationSet run_recommendations(const Corpus& corpus, const CorpusVectorModel& model,
                                      const TeamingConfig& config);

struct PipelineOutput {
  Corpus corpus;
  CorpusVectorModel model;
  RecommendationSet recommendations;
};

PipelineOutput run_pipeline(const CorpusPaths& paths, const TeamingConfig& config, Date reference_date);

// Stats, calls, profiles, awards, model and recommendations as canonical
// JSON text.
std::string serialize_output(const PipelineOutput& output);

struct PublishSummary {
  std::size_t calls = 0;
  std::size_t profiles = 0;
  std::size_t awards = 0;
  std::size_t teams = 0;
  std::size_t new_workflows = 0;
};

// Upserts every record. Existing workflow states are kept; new teams start
// as proposed. Nothing is deleted.
PublishSummary publish(Store& store, const PipelineOutput& output);

}  // namespace teamrec
