#pragma once

// Researcher-to-call scoring on a 0-100 integer scale.
//
// fuzzy:  token-set similarity between the normalized synopsis tokens A and
//         the union of skill canon tokens B:
//
//             sim = |A ∩ B| / HM(|A|, |B|),   HM(a, b) = 2ab / (a + b)
//
//         score = round_half_up(100 * sim), computed in integers. sim is 1
//         only for identical sets; a non-identical pair that would round to
//         100 is reported as 99.
//
// vector: cosine between tf-idf vectors under a CorpusVectorModel built over
//         call synopses. tf is the raw count, idf = ln(1 + N / df). Tokens
//         outside the vocabulary are ignored. score = round_half_up(100 *
//         max(0, cos)); 100 only for proportional term vectors. An imported
//         model scores stored vectors by id instead.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/records.hpp"
#include "teamrec/text.hpp"

namespace teamrec {

enum class MatchStrategy { fuzzy, vector };

std::string_view to_string(MatchStrategy strategy);
std::optional<MatchStrategy> parse_match_strategy(std::string_view text);

enum class MatchFlag {
  none,
  empty_skill_set,
  empty_text,         // synopsis normalized to no tokens
  out_of_vocabulary,  // nothing left after dropping unknown tokens
  zero_vector,        // imported vector of norm 0
};

std::string_view to_string(MatchFlag flag);

struct MatchScore {
  std::string user_id;
  std::string call_id;
  MatchStrategy strategy = MatchStrategy::fuzzy;
  int score = 0;
  MatchFlag flag = MatchFlag::none;

  friend bool operator==(const MatchScore&, const MatchScore&) = default;
};

// Ranked calls for one user: scores non-increasing, ties by ascending
// call_id, at most k entries, no duplicate call ids.
struct MatchList {
  std::string user_id;
  std::vector<MatchScore> entries;
  int k = 0;

  bool contains(std::string_view call_id) const;
  friend bool operator==(const MatchList&, const MatchList&) = default;
};

// Sparse term-count vector over model vocabulary indices, sorted by index.
struct TermCounts {
  std::vector<std::pair<std::size_t, std::int64_t>> counts;
  std::size_t dropped = 0;  // tokens outside the vocabulary
};

class CorpusVectorModel {
 public:
  enum class Source { built, imported };

  static constexpr int kFormatVersion = 1;

  // Vocabulary and document frequencies over normalized synopsis tokens.
  // Throws Error(empty_corpus) when no synopsis has a token.
  static CorpusVectorModel build(const std::vector<std::string>& synopses,
                                 const Normalizer& normalizer = Normalizer::bundled());

  // Lines "id<TAB>v1,v2,...,vn"; blank lines and '#' comments skipped.
  // Throws Error(dimension_mismatch) on ragged widths, Error(parse_error) on
  // bad numbers, Error(duplicate_id) on repeated ids.
  static CorpusVectorModel import_embeddings(std::istream& in);

  // Rebuilds a model from its parts (deserialization). Validates invariants.
  static CorpusVectorModel from_parts(Source source, std::int64_t corpus_size, std::vector<std::string> vocabulary,
                                      std::vector<std::int64_t> document_frequencies,
                                      std::map<std::string, std::vector<double>> embeddings);

  Source source() const noexcept { return source_; }
  std::int64_t corpus_size() const noexcept { return corpus_size_; }
  // Lexicographically sorted; a token's position is its index.
  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<std::int64_t>& document_frequencies() const noexcept { return document_frequencies_; }
  const std::map<std::string, std::vector<double>>& embeddings() const noexcept { return embeddings_; }

  std::optional<std::size_t> index_of(std::string_view token) const;
  std::int64_t document_frequency(std::string_view token) const;  // 0 when unknown
  double idf(std::size_t index) const;
  std::size_t dimension() const noexcept;  // embedding width, 0 for built models

  TermCounts count_terms(const Tokens& tokens) const;
  // Throws Error(unknown_id).
  const std::vector<double>& embedding(std::string_view id) const;

 private:
  Source source_ = Source::built;
  std::int64_t corpus_size_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<std::int64_t> document_frequencies_;
  std::map<std::string, std::vector<double>> embeddings_;
};

CorpusVectorModel build_corpus_model(const std::vector<std::string>& synopses);
CorpusVectorModel import_embeddings(std::istream& in);

// 100 * |A ∩ B| / HM(|A|, |B|), rounded half up; see header comment.
int token_set_score(const std::set<std::string>& a, const std::set<std::string>& b);

MatchScore fuzzy_match(std::string_view synopsis, const SkillSet& skills);

// Built models only; throws Error(invalid_argument) for an imported model.
MatchScore vector_match(std::string_view synopsis, const SkillSet& skills, const CorpusVectorModel& model);

// Cosine of two stored vectors of an imported model.
MatchScore embedding_match(std::string_view call_id, std::string_view user_id, const CorpusVectorModel& model);

// Integer score from tf-idf cosine of two count vectors.
int tfidf_cosine_score(const TermCounts& a, const TermCounts& b, const CorpusVectorModel& model);

// Scores one (call, researcher) pair with ids filled in. The vector strategy
// dispatches on the model source. `model` may be null for fuzzy.
MatchScore score_pair(const CallRecord& call, const ResearcherProfile& user, const CorpusVectorModel* model,
                      MatchStrategy strategy);

// Entries below relevance_floor are excluded before truncating to k.
MatchList top_k_calls(const ResearcherProfile& user, std::span<const CallRecord> calls, const CorpusVectorModel* model,
                      MatchStrategy strategy, int k, int relevance_floor = 0);

// Precomputed per-call state so ranking many users does not re-tokenize
// every synopsis.
class CallScorer {
 public:
  CallScorer(std::span<const CallRecord> calls, const CorpusVectorModel* model, MatchStrategy strategy);

  MatchList rank(const ResearcherProfile& user, int k, int relevance_floor) const;
  MatchScore score(std::size_t call_index, const ResearcherProfile& user) const;
  std::size_t size() const noexcept { return calls_.size(); }

 private:
  std::span<const CallRecord> calls_;
  const CorpusVectorModel* model_;
  MatchStrategy strategy_;
  std::vector<std::set<std::string>> token_sets_;
  std::vector<TermCounts> term_counts_;
};

}  // namespace teamrec
