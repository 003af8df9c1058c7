#include "teamrec/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "teamrec/common.hpp"
#include "teamrec/matching.hpp"

namespace teamrec {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const TaxonomyEntry* Taxonomy::find(std::string_view code) const {
  for (const auto& e : entries) {
    if (e.code == code) return &e;
  }
  return nullptr;
}

Taxonomy load_taxonomy(std::istream& in, std::string name) {
  Taxonomy taxonomy;
  taxonomy.name = std::move(name);
  std::set<std::string, std::less<>> codes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected code<TAB>term");
    }
    const std::string code(trim(std::string_view(line).substr(0, tab)));
    const std::string term(trim(std::string_view(line).substr(tab + 1)));
    if (code.empty() || term.empty()) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": empty code or term");
    }
    if (!codes.insert(code).second) {
      throw Error(ErrorCode::duplicate_code, "line " + std::to_string(line_no) + ": duplicate code " + code);
    }
    TaxonomyEntry entry{code, term, normalize_skill(term), {}};
    if (!entry.canon.empty()) entry.skills = SkillSet::from_skills({Skill{term, entry.canon}});
    taxonomy.entries.push_back(std::move(entry));
  }
  if (taxonomy.entries.empty()) throw Error(ErrorCode::empty_file, "taxonomy has no entries");
  return taxonomy;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return load_taxonomy(in, path.stem().string());
}

std::vector<TaxonomyMatch> map_text(std::string_view text, int threshold, const Taxonomy& taxonomy) {
  if (threshold < 0 || threshold > 100) throw Error(ErrorCode::invalid_argument, "threshold must be within [0, 100]");
  std::vector<TaxonomyMatch> out;
  for (const auto& entry : taxonomy.entries) {
    const int score = fuzzy_match(text, entry.skills).score;
    if (score >= threshold) out.push_back({entry.code, entry.term, score});
  }
  std::sort(out.begin(), out.end(), [](const TaxonomyMatch& a, const TaxonomyMatch& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.code < b.code;
  });
  return out;
}

std::string render_matches(const std::vector<TaxonomyMatch>& matches) {
  std::size_t code_width = 4;
  for (const auto& m : matches) code_width = std::max(code_width, m.code.size());
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
  };
  std::string out = "score  " + pad("code", code_width) + "  term\n";
  for (const auto& m : matches) {
    std::string score = std::to_string(m.score);
    out += std::string(5 - std::min<std::size_t>(5, score.size()), ' ') + score + "  " + pad(m.code, code_width) +
           "  " + m.term + "\n";
  }
  return out;
}

}  // namespace teamrec
