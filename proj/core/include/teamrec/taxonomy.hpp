#pragma once

// Flat classification taxonomies (code, term) and fuzzy text-to-code mapping.
//
// File format: one `code<TAB>term` per line. Blank lines and lines starting
// with '#' are skipped.

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "teamrec/text.hpp"

namespace teamrec {

struct TaxonomyEntry {
  std::string code;
  std::string term;
  Tokens canon;
  SkillSet skills;  // the term as a one-skill set
};

struct Taxonomy {
  std::string name;
  std::vector<TaxonomyEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  const TaxonomyEntry* find(std::string_view code) const;
};

// Throws Error(duplicate_code), Error(empty_file) when no entry is present,
// Error(parse_error) for a line without a tab or with an empty code or term.
Taxonomy load_taxonomy(std::istream& in, std::string name = "taxonomy");
Taxonomy load_taxonomy(const std::filesystem::path& path);

struct TaxonomyMatch {
  std::string code;
  std::string term;
  int score = 0;

  friend bool operator==(const TaxonomyMatch&, const TaxonomyMatch&) = default;
};

// Entries scoring >= threshold, sorted by (score desc, code asc). Throws
// Error(invalid_argument) unless 0 <= threshold <= 100.
std::vector<TaxonomyMatch> map_text(std::string_view text, int threshold, const Taxonomy& taxonomy);

// Fixed-width "score  code  term" table with a header row.
std::string render_matches(const std::vector<TaxonomyMatch>& matches);

}  // namespace teamrec
