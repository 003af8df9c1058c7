#pragma once

// Skill normalization: tokenization, stop-word removal, suffix stemming and
// the canonical SkillSet built from several raw skill sources.

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teamrec {

using Tokens = std::vector<std::string>;

// Splits on every non-alphanumeric ASCII byte and lowercases. Digits are kept,
// so "P4" yields "p4".
Tokens tokenize(std::string_view text);

class StopWords {
 public:
  StopWords() = default;

  // One word per line; '#' starts a comment line.
  static StopWords parse(std::string_view text);
  // The list shipped in core/data/stopwords.txt.
  static const StopWords& bundled();

  bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

class Stemmer {
 public:
  virtual ~Stemmer() = default;
  // Must be idempotent: stem(stem(w)) == stem(w).
  virtual std::string stem(std::string_view token) const = 0;
};

struct SuffixRule {
  std::string suffix;
  std::string replacement;
  bool protect = false;  // matching ending stops stemming
};

// Table-driven suffix stripper. Rules are tried longest suffix first; a rule
// fires only if the remaining stem keeps kMinStem characters. Repeats to a
// fixpoint.
class SuffixStemmer final : public Stemmer {
 public:
  static constexpr std::size_t kMinStem = 3;

  explicit SuffixStemmer(std::vector<SuffixRule> rules);

  static std::vector<SuffixRule> parse_rules(std::string_view text);
  // The table shipped in core/data/suffix_rules.txt.
  static std::shared_ptr<const SuffixStemmer> bundled();

  std::string stem(std::string_view token) const override;
  const std::vector<SuffixRule>& rules() const noexcept { return rules_; }

 private:
  std::vector<SuffixRule> rules_;  // sorted by descending suffix length
};

class Normalizer {
 public:
  Normalizer(StopWords stop_words, std::shared_ptr<const Stemmer> stemmer);

  static const Normalizer& bundled();

  // Lowercase tokens with stop words removed and each token stemmed. A token
  // whose stem is itself a stop word is dropped too, which keeps
  // normalize(join(normalize(x))) == normalize(x).
  Tokens normalize(std::string_view raw) const;

  const StopWords& stop_words() const noexcept { return stop_words_; }
  const Stemmer& stemmer() const noexcept { return *stemmer_; }

 private:
  StopWords stop_words_;
  std::shared_ptr<const Stemmer> stemmer_;
};

// Canonical token list of one raw skill string under the bundled normalizer.
Tokens normalize_skill(std::string_view raw);

struct Skill {
  std::string display;
  Tokens canon;

  friend bool operator==(const Skill&, const Skill&) = default;
};

// Raw skills keyed by source label, in merge precedence order (earliest
// source wins the display form).
using SourceSkills = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Deduplicated skills ordered lexicographically by canon.
class SkillSet {
 public:
  SkillSet() = default;

  static SkillSet build(const SourceSkills& raw_by_source,
                        const Normalizer& normalizer = Normalizer::bundled());
  // Trusts the caller: skills must have distinct, non-empty canons.
  static SkillSet from_skills(std::vector<Skill> skills);

  const std::vector<Skill>& skills() const noexcept { return skills_; }
  bool empty() const noexcept { return skills_.empty(); }
  std::size_t size() const noexcept { return skills_.size(); }

  // Every canon token, skills concatenated in set order.
  Tokens concatenated_tokens() const;
  std::set<std::string> token_set() const;

  friend bool operator==(const SkillSet&, const SkillSet&) = default;

 private:
  std::vector<Skill> skills_;
};

SkillSet build_skill_set(const SourceSkills& raw_by_source);

std::string join_tokens(const Tokens& tokens, std::string_view sep = " ");

}  // namespace teamrec
