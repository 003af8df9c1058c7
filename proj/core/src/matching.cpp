#include "teamrec/matching.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "teamrec/common.hpp"

namespace teamrec {

std::string_view to_string(MatchStrategy strategy) {
  return strategy == MatchStrategy::fuzzy ? "fuzzy" : "vector";
}

std::optional<MatchStrategy> parse_match_strategy(std::string_view text) {
  if (text == "fuzzy") return MatchStrategy::fuzzy;
  if (text == "vector") return MatchStrategy::vector;
  return std::nullopt;
}

std::string_view to_string(MatchFlag flag) {
  switch (flag) {
    case MatchFlag::none: return "none";
    case MatchFlag::empty_skill_set: return "empty_skill_set";
    case MatchFlag::empty_text: return "empty_text";
    case MatchFlag::out_of_vocabulary: return "out_of_vocabulary";
    case MatchFlag::zero_vector: return "zero_vector";
  }
  return "none";
}

bool MatchList::contains(std::string_view call_id) const {
  return std::any_of(entries.begin(), entries.end(), [&](const MatchScore& s) { return s.call_id == call_id; });
}

// ---- model ------------------------------------------------------------------

CorpusVectorModel CorpusVectorModel::build(const std::vector<std::string>& synopses, const Normalizer& normalizer) {
  std::map<std::string, std::int64_t> df;
  std::int64_t documents = 0;
  for (const auto& synopsis : synopses) {
    Tokens tokens = normalizer.normalize(synopsis);
    if (tokens.empty()) continue;
    ++documents;
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }
  if (documents == 0) throw Error(ErrorCode::empty_corpus, "no synopsis produced any token");

  CorpusVectorModel model;
  model.source_ = Source::built;
  model.corpus_size_ = documents;
  model.vocabulary_.reserve(df.size());
  model.document_frequencies_.reserve(df.size());
  for (auto& [token, count] : df) {
    model.vocabulary_.push_back(token);
    model.document_frequencies_.push_back(count);
  }
  return model;
}

CorpusVectorModel CorpusVectorModel::import_embeddings(std::istream& in) {
  std::map<std::string, std::vector<double>> vectors;
  std::optional<std::size_t> width;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::parse_error, "embedding line " + std::to_string(line_no) + " lacks id<TAB>values");
    }
    std::string id = line.substr(0, tab);
    std::vector<double> values;
    std::string_view rest(line);
    rest.remove_prefix(tab + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      auto end = rest.find(',', pos);
      if (end == std::string_view::npos) end = rest.size();
      std::string_view cell = rest.substr(pos, end - pos);
      while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
      while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::parse_error, "bad number '" + std::string(cell) + "' on embedding line " +
                                                std::to_string(line_no));
      }
      values.push_back(v);
      pos = end + 1;
    }
    if (width && *width != values.size()) {
      throw Error(ErrorCode::dimension_mismatch, "line " + std::to_string(line_no) + " has width " +
                                                     std::to_string(values.size()) + ", expected " +
                                                     std::to_string(*width));
    }
    width = values.size();
    if (!vectors.emplace(id, std::move(values)).second) {
      throw Error(ErrorCode::duplicate_id, "embedding id repeated: " + id);
    }
  }
  if (vectors.empty()) throw Error(ErrorCode::empty_corpus, "embedding table is empty");
  CorpusVectorModel model;
  model.source_ = Source::imported;
  model.corpus_size_ = static_cast<std::int64_t>(vectors.size());
  model.embeddings_ = std::move(vectors);
  return model;
}

CorpusVectorModel CorpusVectorModel::from_parts(Source source, std::int64_t corpus_size,
                                                std::vector<std::string> vocabulary,
                                                std::vector<std::int64_t> document_frequencies,
                                                std::map<std::string, std::vector<double>> embeddings) {
  if (corpus_size < 1) throw Error(ErrorCode::invalid_argument, "corpus_size must be >= 1");
  if (vocabulary.size() != document_frequencies.size()) {
    throw Error(ErrorCode::invalid_argument, "vocabulary and document frequencies differ in length");
  }
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    if (document_frequencies[i] < 1 || document_frequencies[i] > corpus_size) {
      throw Error(ErrorCode::invalid_argument, "document frequency out of range for " + vocabulary[i]);
    }
    if (i > 0 && !(vocabulary[i - 1] < vocabulary[i])) {
      throw Error(ErrorCode::invalid_argument, "vocabulary must be strictly sorted");
    }
  }
  if (source == Source::imported) {
    std::optional<std::size_t> width;
    for (const auto& [id, v] : embeddings) {
      if (width && *width != v.size()) throw Error(ErrorCode::dimension_mismatch, "ragged embedding " + id);
      width = v.size();
    }
  }
  CorpusVectorModel model;
  model.source_ = source;
  model.corpus_size_ = corpus_size;
  model.vocabulary_ = std::move(vocabulary);
  model.document_frequencies_ = std::move(document_frequencies);
  model.embeddings_ = std::move(embeddings);
  return model;
}

std::optional<std::size_t> CorpusVectorModel::index_of(std::string_view token) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), token,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == vocabulary_.end() || *it != token) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary_.begin());
}

std::int64_t CorpusVectorModel::document_frequency(std::string_view token) const {
  auto index = index_of(token);
  return index ? document_frequencies_[*index] : 0;
}

double CorpusVectorModel::idf(std::size_t index) const {
  return std::log(1.0 + static_cast<double>(corpus_size_) / static_cast<double>(document_frequencies_.at(index)));
}

std::size_t CorpusVectorModel::dimension() const noexcept {
  return embeddings_.empty() ? 0 : embeddings_.begin()->second.size();
}

TermCounts CorpusVectorModel::count_terms(const Tokens& tokens) const {
  std::map<std::size_t, std::int64_t> counts;
  TermCounts out;
  for (const auto& t : tokens) {
    if (auto index = index_of(t)) {
      ++counts[*index];
    } else {
      ++out.dropped;
    }
  }
  out.counts.assign(counts.begin(), counts.end());
  return out;
}

const std::vector<double>& CorpusVectorModel::embedding(std::string_view id) const {
  auto it = embeddings_.find(std::string(id));
  if (it == embeddings_.end()) throw Error(ErrorCode::unknown_id, "no embedding for id " + std::string(id));
  return it->second;
}

CorpusVectorModel build_corpus_model(const std::vector<std::string>& synopses) {
  return CorpusVectorModel::build(synopses);
}

CorpusVectorModel import_embeddings(std::istream& in) { return CorpusVectorModel::import_embeddings(in); }

// ---- scores -----------------------------------------------------------------

int token_set_score(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::int64_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const auto na = static_cast<std::int64_t>(a.size());
  const auto nb = static_cast<std::int64_t>(b.size());
  // 100 * common / (2 na nb / (na + nb))
  const auto score = static_cast<int>(round_half_up_ratio(100 * common * (na + nb), 2 * na * nb));
  const bool identical = common == na && common == nb;
  return (score == 100 && !identical) ? 99 : score;
}

namespace {

std::set<std::string> as_set(const Tokens& tokens) { return {tokens.begin(), tokens.end()}; }

bool proportional(const TermCounts& a, const TermCounts& b) {
  if (a.counts.size() != b.counts.size()) return false;
  std::int64_t sum_a = 0, sum_b = 0;
  for (const auto& [i, c] : a.counts) sum_a += c;
  for (const auto& [i, c] : b.counts) sum_b += c;
  for (std::size_t k = 0; k < a.counts.size(); ++k) {
    if (a.counts[k].first != b.counts[k].first) return false;
    if (a.counts[k].second * sum_b != b.counts[k].second * sum_a) return false;
  }
  return true;
}

}  // namespace

int tfidf_cosine_score(const TermCounts& a, const TermCounts& b, const CorpusVectorModel& model) {
  if (a.counts.empty() || b.counts.empty()) return 0;
  auto norm_sq = [&](const TermCounts& v) {
    double sum = 0;
    for (const auto& [i, c] : v.counts) {
      const double w = static_cast<double>(c) * model.idf(i);
      sum += w * w;
    }
    return sum;
  };
  double dot = 0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      const double idf = model.idf(ia->first);
      dot += (static_cast<double>(ia->second) * idf) * (static_cast<double>(ib->second) * idf);
      ++ia;
      ++ib;
    }
  }
  const double cosine = dot / (std::sqrt(norm_sq(a)) * std::sqrt(norm_sq(b)));
  const int score = round_half_up_percent(std::max(0.0, cosine));
  return (score == 100 && !proportional(a, b)) ? 99 : score;
}

MatchScore fuzzy_match(std::string_view synopsis, const SkillSet& skills) {
  MatchScore out;
  out.strategy = MatchStrategy::fuzzy;
  if (skills.empty()) {
    out.flag = MatchFlag::empty_skill_set;
    return out;
  }
  const auto text_tokens = as_set(Normalizer::bundled().normalize(synopsis));
  if (text_tokens.empty()) {
    out.flag = MatchFlag::empty_text;
    return out;
  }
  out.score = token_set_score(text_tokens, skills.token_set());
  return out;
}

MatchScore vector_match(std::string_view synopsis, const SkillSet& skills, const CorpusVectorModel& model) {
  if (model.source() != CorpusVectorModel::Source::built) {
    throw Error(ErrorCode::invalid_argument, "text matching needs a built model; use embedding_match");
  }
  MatchScore out;
  out.strategy = MatchStrategy::vector;
  if (skills.empty()) {
    out.flag = MatchFlag::empty_skill_set;
    return out;
  }
  const Tokens text_tokens = Normalizer::bundled().normalize(synopsis);
  if (text_tokens.empty()) {
    out.flag = MatchFlag::empty_text;
    return out;
  }
  const TermCounts a = model.count_terms(text_tokens);
  const TermCounts b = model.count_terms(skills.concatenated_tokens());
  if (a.counts.empty() || b.counts.empty()) {
    out.flag = MatchFlag::out_of_vocabulary;
    return out;
  }
  out.score = tfidf_cosine_score(a, b, model);
  return out;
}

MatchScore embedding_match(std::string_view call_id, std::string_view user_id, const CorpusVectorModel& model) {
  const auto& a = model.embedding(call_id);
  const auto& b = model.embedding(user_id);
  MatchScore out;
  out.user_id = std::string(user_id);
  out.call_id = std::string(call_id);
  out.strategy = MatchStrategy::vector;
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) {
    out.flag = MatchFlag::zero_vector;
    return out;
  }
  const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  out.score = round_half_up_percent(std::max(0.0, cosine));
  if (out.score == 100 && cosine < 1.0 - 1e-12) out.score = 99;
  return out;
}

MatchScore score_pair(const CallRecord& call, const ResearcherProfile& user, const CorpusVectorModel* model,
                      MatchStrategy strategy) {
  MatchScore out;
  if (strategy == MatchStrategy::fuzzy) {
    out = fuzzy_match(call.synopsis, user.skills);
  } else {
    if (!model) throw Error(ErrorCode::invalid_argument, "vector strategy needs a model");
    if (model->source() == CorpusVectorModel::Source::imported) return embedding_match(call.call_id, user.user_id, *model);
    out = vector_match(call.synopsis, user.skills, *model);
  }
  out.user_id = user.user_id;
  out.call_id = call.call_id;
  return out;
}

MatchList top_k_calls(const ResearcherProfile& user, std::span<const CallRecord> calls, const CorpusVectorModel* model,
                      MatchStrategy strategy, int k, int relevance_floor) {
  return CallScorer(calls, model, strategy).rank(user, k, relevance_floor);
}

// ---- batch scoring ----------------------------------------------------------

CallScorer::CallScorer(std::span<const CallRecord> calls, const CorpusVectorModel* model, MatchStrategy strategy)
    : calls_(calls), model_(model), strategy_(strategy) {
  if (strategy_ == MatchStrategy::vector && !model_) {
    throw Error(ErrorCode::invalid_argument, "vector strategy needs a model");
  }
  const auto& normalizer = Normalizer::bundled();
  const bool use_terms = strategy_ == MatchStrategy::vector && model_->source() == CorpusVectorModel::Source::built;
  if (strategy_ == MatchStrategy::fuzzy) token_sets_.reserve(calls_.size());
  if (use_terms) term_counts_.reserve(calls_.size());
  for (const auto& call : calls_) {
    if (strategy_ == MatchStrategy::fuzzy) {
      token_sets_.push_back(as_set(normalizer.normalize(call.synopsis)));
    } else if (use_terms) {
      term_counts_.push_back(model_->count_terms(normalizer.normalize(call.synopsis)));
    }
  }
}

MatchScore CallScorer::score(std::size_t call_index, const ResearcherProfile& user) const {
  const CallRecord& call = calls_[call_index];
  if (strategy_ == MatchStrategy::vector && model_->source() == CorpusVectorModel::Source::imported) {
    return embedding_match(call.call_id, user.user_id, *model_);
  }
  MatchScore out;
  out.user_id = user.user_id;
  out.call_id = call.call_id;
  out.strategy = strategy_;
  if (user.skills.empty()) {
    out.flag = MatchFlag::empty_skill_set;
    return out;
  }
  if (strategy_ == MatchStrategy::fuzzy) {
    const auto& text = token_sets_[call_index];
    if (text.empty()) {
      out.flag = MatchFlag::empty_text;
    } else {
      out.score = token_set_score(text, user.skills.token_set());
    }
    return out;
  }
  const TermCounts& a = term_counts_[call_index];
  const TermCounts b = model_->count_terms(user.skills.concatenated_tokens());
  if (a.counts.empty() || b.counts.empty()) {
    out.flag = a.counts.empty() && a.dropped == 0 ? MatchFlag::empty_text : MatchFlag::out_of_vocabulary;
    return out;
  }
  out.score = tfidf_cosine_score(a, b, *model_);
  return out;
}

MatchList CallScorer::rank(const ResearcherProfile& user, int k, int relevance_floor) const {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "k must be >= 0");
  MatchList list;
  list.user_id = user.user_id;
  list.k = k;
  std::vector<MatchScore> scored;
  scored.reserve(calls_.size());
  for (std::size_t i = 0; i < calls_.size(); ++i) {
    MatchScore s = score(i, user);
    if (s.score >= relevance_floor) scored.push_back(std::move(s));
  }
  std::sort(scored.begin(), scored.end(), [](const MatchScore& a, const MatchScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.call_id < b.call_id;
  });
  // Duplicate call ids keep their best-ranked entry.
  std::set<std::string_view> seen;
  std::erase_if(scored, [&](const MatchScore& s) { return !seen.insert(s.call_id).second; });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
  list.entries = std::move(scored);
  return list;
}

}  // namespace teamrec
