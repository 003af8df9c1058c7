#include "teamrec/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "teamrec/common.hpp"

namespace teamrec {

namespace bundled {
std::string_view stop_words_text();
std::string_view suffix_rules_text();
}  // namespace bundled

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Visits each non-empty, non-comment line with surrounding whitespace trimmed.
template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') fn(line);
    pos = end + 1;
  }
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  for (char c : text) {
    if (is_alnum(c)) {
      current += lower(c);
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

StopWords StopWords::parse(std::string_view text) {
  StopWords sw;
  for_each_data_line(text, [&](std::string_view line) {
    for (auto& token : tokenize(line)) sw.words_.insert(std::move(token));
  });
  return sw;
}

const StopWords& StopWords::bundled() {
  static const StopWords words = parse(bundled::stop_words_text());
  return words;
}

SuffixStemmer::SuffixStemmer(std::vector<SuffixRule> rules) : rules_(std::move(rules)) {
  for (const auto& rule : rules_) {
    if (rule.suffix.empty()) throw Error(ErrorCode::invalid_argument, "empty suffix in stemmer rule");
    if (!rule.protect && rule.replacement.size() >= rule.suffix.size()) {
      // A rule that does not shorten the token could loop forever.
      throw Error(ErrorCode::invalid_argument, "stemmer rule must shorten: " + rule.suffix);
    }
  }
  std::stable_sort(rules_.begin(), rules_.end(), [](const SuffixRule& a, const SuffixRule& b) {
    return a.suffix.size() > b.suffix.size();
  });
}

std::vector<SuffixRule> SuffixStemmer::parse_rules(std::string_view text) {
  std::vector<SuffixRule> rules;
  for_each_data_line(text, [&](std::string_view line) {
    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) {
      throw Error(ErrorCode::parse_error, "stemmer rule needs suffix and action: " + std::string(line));
    }
    SuffixRule rule;
    rule.suffix = std::string(line.substr(0, split));
    std::string_view action = line.substr(split);
    while (!action.empty() && std::isspace(static_cast<unsigned char>(action.front()))) action.remove_prefix(1);
    if (action == "=") {
      rule.protect = true;
    } else if (action != "-") {
      rule.replacement = std::string(action);
    }
    rules.push_back(std::move(rule));
  });
  return rules;
}

std::shared_ptr<const SuffixStemmer> SuffixStemmer::bundled() {
  static const auto stemmer =
      std::make_shared<const SuffixStemmer>(parse_rules(bundled::suffix_rules_text()));
  return stemmer;
}

std::string SuffixStemmer::stem(std::string_view token) const {
  std::string word(token);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : rules_) {
      if (word.size() < rule.suffix.size() ||
          word.compare(word.size() - rule.suffix.size(), rule.suffix.size(), rule.suffix) != 0) {
        continue;
      }
      if (rule.protect) return word;
      const std::size_t stem_len = word.size() - rule.suffix.size();
      if (stem_len + rule.replacement.size() < kMinStem || stem_len < kMinStem) continue;
      word.resize(stem_len);
      word += rule.replacement;
      changed = true;
      break;
    }
  }
  return word;
}

Normalizer::Normalizer(StopWords stop_words, std::shared_ptr<const Stemmer> stemmer)
    : stop_words_(std::move(stop_words)), stemmer_(std::move(stemmer)) {
  if (!stemmer_) throw Error(ErrorCode::invalid_argument, "normalizer needs a stemmer");
}

const Normalizer& Normalizer::bundled() {
  static const Normalizer normalizer(StopWords::bundled(), SuffixStemmer::bundled());
  return normalizer;
}

Tokens Normalizer::normalize(std::string_view raw) const {
  Tokens out;
  for (auto& token : tokenize(raw)) {
    if (stop_words_.contains(token)) continue;
    std::string stemmed = stemmer_->stem(token);
    if (stemmed.empty() || stop_words_.contains(stemmed)) continue;
    out.push_back(std::move(stemmed));
  }
  return out;
}

Tokens normalize_skill(std::string_view raw) { return Normalizer::bundled().normalize(raw); }

SkillSet SkillSet::build(const SourceSkills& raw_by_source, const Normalizer& normalizer) {
  // canon -> display; the first source to produce a canon owns its display.
  std::map<Tokens, std::string> merged;
  for (const auto& [source, raws] : raw_by_source) {
    std::map<Tokens, std::string> from_source;
    for (const auto& raw : raws) {
      Tokens canon = normalizer.normalize(raw);
      if (canon.empty()) continue;
      auto [it, inserted] = from_source.emplace(std::move(canon), raw);
      // Set semantics within a source: the smallest display wins regardless
      // of list order.
      if (!inserted && raw < it->second) it->second = raw;
    }
    for (auto& [canon, display] : from_source) merged.emplace(canon, std::move(display));
  }
  SkillSet set;
  set.skills_.reserve(merged.size());
  for (auto& [canon, display] : merged) set.skills_.push_back(Skill{std::move(display), canon});
  return set;
}

SkillSet SkillSet::from_skills(std::vector<Skill> skills) {
  std::sort(skills.begin(), skills.end(),
            [](const Skill& a, const Skill& b) { return a.canon < b.canon; });
  SkillSet set;
  set.skills_ = std::move(skills);
  return set;
}

Tokens SkillSet::concatenated_tokens() const {
  Tokens out;
  for (const auto& skill : skills_) out.insert(out.end(), skill.canon.begin(), skill.canon.end());
  return out;
}

std::set<std::string> SkillSet::token_set() const {
  std::set<std::string> out;
  for (const auto& skill : skills_) out.insert(skill.canon.begin(), skill.canon.end());
  return out;
}

SkillSet build_skill_set(const SourceSkills& raw_by_source) { return SkillSet::build(raw_by_source); }

std::string join_tokens(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace teamrec
