#include "teamrec/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

namespace teamrec {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Runs of whitespace become one space; ends trimmed.
std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string> split_list(std::string_view text, std::string_view separators) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find_first_of(separators, pos);
    if (end == std::string_view::npos) end = text.size();
    auto item = trim(text.substr(pos, end - pos));
    if (!item.empty()) out.emplace_back(item);
    pos = end + 1;
  }
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// "label: value" where the label matches one of `labels` case-insensitively.
std::optional<std::string_view> labelled_value(std::string_view line,
                                               std::initializer_list<std::string_view> labels) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const std::string label = collapse_ws(to_lower(line.substr(0, colon)));
  for (auto candidate : labels) {
    if (label == candidate) return trim(line.substr(colon + 1));
  }
  return std::nullopt;
}

// ---- currency amounts -------------------------------------------------------

struct AmountHit {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::int64_t dollars = 0;
};

std::optional<std::int64_t> checked_mul_add(std::int64_t a, std::int64_t m, std::int64_t b) {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  if (a > (kMax - b) / m) return std::nullopt;
  return a * m + b;
}

// Scans a number starting at `pos` (after the '$' and spaces). Returns the end
// offset and value.
std::optional<AmountHit> scan_amount(std::string_view text, std::size_t dollar_pos) {
  std::size_t pos = dollar_pos + 1;
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos >= text.size() || !is_digit(text[pos])) return std::nullopt;

  std::string int_digits;
  const std::size_t first = pos;
  while (pos < text.size() && is_digit(text[pos])) int_digits += text[pos++];
  // Comma groups only when the leading group has 1-3 digits.
  if (pos - first <= 3) {
    while (pos + 3 < text.size() && text[pos] == ',' && is_digit(text[pos + 1]) && is_digit(text[pos + 2]) &&
           is_digit(text[pos + 3]) && (pos + 4 >= text.size() || !is_digit(text[pos + 4]))) {
      int_digits.append(text.substr(pos + 1, 3));
      pos += 4;
    }
  }
  std::string frac_digits;
  if (pos + 1 < text.size() && text[pos] == '.' && is_digit(text[pos + 1])) {
    ++pos;
    while (pos < text.size() && is_digit(text[pos])) frac_digits += text[pos++];
  }
  std::size_t end = pos;

  std::int64_t multiplier = 1;
  std::size_t look = pos;
  while (look < text.size() && text[look] == ' ') ++look;
  auto word_at = [&](std::string_view word, bool case_sensitive) {
    if (look + word.size() > text.size()) return false;
    const auto candidate = text.substr(look, word.size());
    const bool same = case_sensitive ? candidate == word : to_lower(candidate) == word;
    return same && (look + word.size() == text.size() || !is_alnum(text[look + word.size()]));
  };
  if (word_at("billion", false)) {
    multiplier = 1'000'000'000;
    end = look + 7;
  } else if (word_at("million", false)) {
    multiplier = 1'000'000;
    end = look + 7;
  } else if (word_at("thousand", false)) {
    multiplier = 1'000;
    end = look + 8;
  } else if (look == pos && word_at("B", true)) {
    multiplier = 1'000'000'000;
    end = look + 1;
  } else if (look == pos && word_at("M", true)) {
    multiplier = 1'000'000;
    end = look + 1;
  } else if (look == pos && (word_at("K", true) || word_at("k", true))) {
    multiplier = 1'000;
    end = look + 1;
  }

  if (int_digits.size() > 15) return std::nullopt;
  std::int64_t whole = 0;
  std::from_chars(int_digits.data(), int_digits.data() + int_digits.size(), whole);
  std::int64_t fraction_value = 0;
  if (!frac_digits.empty()) {
    // floor(0.frac * multiplier) computed exactly on at most 9 digits.
    frac_digits.resize(std::min<std::size_t>(frac_digits.size(), 9));
    std::int64_t frac = 0;
    std::from_chars(frac_digits.data(), frac_digits.data() + frac_digits.size(), frac);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_digits.size(); ++i) scale *= 10;
    fraction_value = frac * multiplier / scale;
  }
  auto dollars = checked_mul_add(whole, multiplier, fraction_value);
  if (!dollars) return std::nullopt;
  return AmountHit{dollar_pos, end, *dollars};
}

struct Sentence {
  std::size_t begin;
  std::size_t end;
};

// Sentences end at '.', '!' or '?' followed by whitespace, or at a line break.
std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool terminal = (c == '.' || c == '!' || c == '?') &&
                          (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])));
    if (c == '\n' || terminal) {
      out.push_back({start, i + 1});
      start = i + 1;
    }
  }
  if (start < text.size()) out.push_back({start, text.size()});
  return out;
}

constexpr std::string_view kBudgetCues[] = {"budget", "funding amount", "anticipated funding"};

// ---- dates ------------------------------------------------------------------

unsigned month_number(std::string_view name) {
  static constexpr std::string_view kMonths[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                                 "jul", "aug", "sep", "oct", "nov", "dec"};
  const std::string lower = to_lower(name.substr(0, 3));
  for (unsigned i = 0; i < 12; ++i) {
    if (lower == kMonths[i]) return i + 1;
  }
  return 0;
}

}  // namespace

// ---- records ----------------------------------------------------------------

std::optional<Date> CallRecord::next_deadline(Date reference) const {
  for (const auto& d : deadlines) {
    if (d >= reference) return d;
  }
  return std::nullopt;
}

std::optional<Date> CallRecord::last_deadline() const {
  if (deadlines.empty()) return std::nullopt;
  return deadlines.back();
}

std::string_view to_string(Role role) {
  return role == Role::administrator ? "administrator" : "participant";
}

std::optional<Role> parse_role(std::string_view text) {
  const std::string lower = to_lower(trim(text));
  if (lower.empty() || lower == "participant") return Role::participant;
  if (lower == "administrator" || lower == "admin") return Role::administrator;
  return std::nullopt;
}

// ---- call container ---------------------------------------------------------

std::optional<std::string> RawCallRecord::field(std::string_view key) const {
  auto it = fields.find(std::string(key));
  if (it == fields.end()) return std::nullopt;
  return it->second;
}

std::vector<RawCallRecord> read_call_container(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_call_container(buffer.str());
}

std::vector<RawCallRecord> read_call_container(std::string_view text) {
  std::vector<RawCallRecord> records;
  const auto lines = split_lines(text);

  RawCallRecord current;
  bool in_record = false;
  bool in_body = false;
  std::string last_key;
  std::vector<std::string_view> body_lines;

  auto finish = [&] {
    if (in_record) {
      while (!body_lines.empty() && trim(body_lines.back()).empty()) body_lines.pop_back();
      std::string body;
      for (std::size_t i = 0; i < body_lines.size(); ++i) {
        if (i > 0) body += '\n';
        body.append(body_lines[i]);
      }
      current.body = std::move(body);
      records.push_back(std::move(current));
    }
    current = RawCallRecord{};
    in_record = in_body = false;
    last_key.clear();
    body_lines.clear();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (trim(line) == "%%") {
      finish();
      continue;
    }
    if (in_body) {
      body_lines.push_back(line);
      continue;
    }
    if (!in_record) {
      if (trim(line).empty() || line.front() == '#') continue;
      in_record = true;
      current.line = i + 1;
    }
    if (trim(line).empty()) {
      in_body = true;
      continue;
    }
    if ((line.front() == ' ' || line.front() == '\t') && !last_key.empty()) {
      auto& value = current.fields[last_key];
      value += ' ';
      value.append(trim(line));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      // No header block: the record is body only.
      in_body = true;
      body_lines.push_back(line);
      continue;
    }
    last_key = to_lower(trim(line.substr(0, colon)));
    current.fields[last_key] = std::string(trim(line.substr(colon + 1)));
  }
  finish();
  return records;
}

// ---- call fields ------------------------------------------------------------

std::optional<Money> parse_money(std::string_view text) {
  std::string digits;
  text = trim(text);
  if (!text.empty() && text.front() == '$') text.remove_prefix(1);
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    if (is_digit(text[i])) digits += text[i];
    else if (text[i] != ',') break;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && is_digit(text[i])) ++i;
  }
  if (digits.empty() || digits.size() > 15 || !trim(text.substr(i)).empty()) return std::nullopt;
  std::int64_t value = 0;
  std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (value <= 0) return std::nullopt;
  return Money{value};
}

std::optional<Money> extract_budget(std::string_view text) {
  std::vector<AmountHit> amounts;
  for (std::size_t pos = text.find('$'); pos != std::string_view::npos; pos = text.find('$', pos + 1)) {
    if (auto hit = scan_amount(text, pos); hit && hit->dollars > 0) amounts.push_back(*hit);
  }
  if (amounts.empty()) return std::nullopt;

  const std::string lower = to_lower(text);
  const AmountHit* best = nullptr;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& sentence : split_sentences(text)) {
    std::vector<std::pair<std::size_t, std::size_t>> cues;  // [begin, end)
    for (auto cue : kBudgetCues) {
      for (auto at = lower.find(cue, sentence.begin); at != std::string::npos && at + cue.size() <= sentence.end;
           at = lower.find(cue, at + 1)) {
        cues.emplace_back(at, at + cue.size());
      }
    }
    if (cues.empty()) continue;
    for (const auto& amount : amounts) {
      if (amount.begin < sentence.begin || amount.end > sentence.end) continue;
      for (const auto& [cb, ce] : cues) {
        const std::size_t distance = amount.begin >= ce ? amount.begin - ce : (cb >= amount.end ? cb - amount.end : 0);
        // Amounts are visited in text order, so strict '<' keeps the earlier one on ties.
        if (distance < best_distance) {
          best_distance = distance;
          best = &amount;
        }
      }
    }
  }
  if (!best) best = &amounts.front();
  return Money{best->dollars};
}

DeadlineScan extract_deadlines(std::string_view text) {
  static const std::regex kMonthDay(
      R"(\b(January|February|March|April|May|June|July|August|September|October|November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Sept|Oct|Nov|Dec)\.?\s+(\d{1,2}),?\s+(\d{4})\b)",
      std::regex::icase);
  static const std::regex kNumeric(R"(\b(\d{1,2})/(\d{1,2})/(\d{4})\b)");

  DeadlineScan scan;
  std::set<Date> found;
  const std::string haystack(text);
  auto consider = [&](int year, unsigned month, unsigned day, const std::string& matched) {
    if (auto date = Date::from_ymd(year, month, day)) {
      found.insert(*date);
    } else {
      scan.malformed.push_back(matched);
    }
  };
  for (std::sregex_iterator it(haystack.begin(), haystack.end(), kMonthDay), end; it != end; ++it) {
    const auto& m = *it;
    consider(std::stoi(m[3].str()), month_number(m[1].str()), static_cast<unsigned>(std::stoul(m[2].str())),
             m[0].str());
  }
  for (std::sregex_iterator it(haystack.begin(), haystack.end(), kNumeric), end; it != end; ++it) {
    const auto& m = *it;
    consider(std::stoi(m[3].str()), static_cast<unsigned>(std::stoul(m[1].str())),
             static_cast<unsigned>(std::stoul(m[2].str())), m[0].str());
  }
  scan.dates.assign(found.begin(), found.end());
  return scan;
}

namespace {

std::optional<std::string> title_from_body(std::string_view body) {
  for (auto line : split_lines(body)) {
    if (auto value = labelled_value(line, {"title", "program title"}); value && !value->empty()) {
      return collapse_ws(*value);
    }
  }
  return std::nullopt;
}

// Text of a "Synopsis:" section up to the next blank line.
std::optional<std::string> synopsis_from_body(std::string_view body) {
  const auto lines = split_lines(body);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto value = labelled_value(lines[i], {"synopsis", "synopsis of program", "program synopsis", "summary"});
    if (!value) continue;
    std::string section(*value);
    for (std::size_t j = i + 1; j < lines.size() && !trim(lines[j]).empty(); ++j) {
      section += ' ';
      section.append(lines[j]);
    }
    std::string collapsed = collapse_ws(section);
    if (!collapsed.empty()) return collapsed;
  }
  return std::nullopt;
}

}  // namespace

CallParseResult parse_call_record(const RawCallRecord& raw, Date reference_date) {
  CallParseResult result;
  const std::string id = collapse_ws(raw.field("id").value_or(""));
  if (id.empty()) {
    result.issues.push_back({ErrorCode::parse_error, "", "record at line " + std::to_string(raw.line) + " has no id"});
    return result;
  }

  CallRecord call;
  call.call_id = id;
  call.agency_id = collapse_ws(raw.field("agency").value_or(""));
  call.url = collapse_ws(raw.field("url").value_or(""));

  if (auto title = raw.field("title"); title && !collapse_ws(*title).empty()) {
    call.title = collapse_ws(*title);
  } else {
    call.title = title_from_body(raw.body);
  }

  if (auto synopsis = raw.field("synopsis"); synopsis && !collapse_ws(*synopsis).empty()) {
    call.synopsis = collapse_ws(*synopsis);
  } else if (auto section = synopsis_from_body(raw.body)) {
    call.synopsis = std::move(*section);
  } else {
    call.synopsis = collapse_ws(raw.body);
  }
  if (call.synopsis.empty()) {
    result.issues.push_back({ErrorCode::missing_synopsis, id, "no synopsis or body text"});
    return result;
  }

  std::string date_text = raw.body;
  if (auto extra = raw.field("deadline")) date_text += "\n" + *extra;
  if (auto extra = raw.field("deadlines")) date_text += "\n" + *extra;
  DeadlineScan scan = extract_deadlines(date_text);
  for (const auto& bad : scan.malformed) {
    result.issues.push_back({ErrorCode::malformed_date, id, bad});
  }
  call.deadlines = std::move(scan.dates);

  if (auto budget_field = raw.field("budget")) {
    call.budget_total = parse_money(*budget_field);
    if (!call.budget_total) call.budget_total = extract_budget(*budget_field);
  }
  if (!call.budget_total) call.budget_total = extract_budget(raw.body);

  if (auto keywords = raw.field("keywords")) call.keywords = split_list(*keywords, ";,");
  call.is_open = !call.deadlines.empty() && call.deadlines.back() >= reference_date;

  result.record = std::move(call);
  return result;
}

CallCorpusResult parse_call_corpus(const std::vector<RawCallRecord>& raws, Date reference_date) {
  CallCorpusResult out;
  std::set<std::string> seen;
  for (const auto& raw : raws) {
    ++out.total_records;
    auto parsed = parse_call_record(raw, reference_date);
    out.issues.insert(out.issues.end(), parsed.issues.begin(), parsed.issues.end());
    if (!parsed.record) {
      ++out.rejected;
      continue;
    }
    if (!seen.insert(parsed.record->call_id).second) {
      ++out.rejected;
      out.issues.push_back({ErrorCode::duplicate_id, parsed.record->call_id, "duplicate call id"});
      continue;
    }
    out.calls.push_back(std::move(*parsed.record));
  }
  return out;
}

// ---- roster -----------------------------------------------------------------

std::vector<RosterRecord> read_roster(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_roster(buffer.str());
}

std::vector<RosterRecord> read_roster(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && (trim(lines[i]).empty() || lines[i].front() == '#')) ++i;
  if (i == lines.size()) return {};

  std::map<std::string, std::size_t> column;
  {
    std::size_t index = 0;
    std::size_t pos = 0;
    const auto header = lines[i];
    while (pos <= header.size()) {
      auto end = header.find('\t', pos);
      if (end == std::string_view::npos) end = header.size();
      column[to_lower(trim(header.substr(pos, end - pos)))] = index++;
      pos = end + 1;
    }
  }
  for (auto required : {"username", "display_name", "designation", "skills_site", "skills_scholar"}) {
    if (!column.count(required)) {
      throw Error(ErrorCode::parse_error, std::string("roster header lacks column ") + required);
    }
  }

  std::vector<RosterRecord> records;
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty() || lines[i].front() == '#') continue;
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    const auto line = lines[i];
    while (pos <= line.size()) {
      auto end = line.find('\t', pos);
      if (end == std::string_view::npos) end = line.size();
      cells.push_back(trim(line.substr(pos, end - pos)));
      pos = end + 1;
    }
    auto cell = [&](const char* name) -> std::string_view {
      auto it = column.find(name);
      if (it == column.end() || it->second >= cells.size()) return {};
      return cells[it->second];
    };
    RosterRecord r;
    r.user_id = std::string(cell("user_id"));
    r.username = std::string(cell("username"));
    r.display_name = collapse_ws(cell("display_name"));
    r.designation = collapse_ws(cell("designation"));
    auto role = parse_role(cell("role"));
    if (!role) throw Error(ErrorCode::parse_error, "unknown role on roster line " + std::to_string(i + 1));
    r.role = *role;
    r.skills_site = split_list(cell("skills_site"), ";");
    r.skills_scholar = split_list(cell("skills_scholar"), ";");
    records.push_back(std::move(r));
  }
  return records;
}

bool DesignationFilter::excludes(std::string_view designation) const {
  const std::string lower = to_lower(designation);
  return std::any_of(deny.begin(), deny.end(),
                     [&](const std::string& word) { return lower.find(to_lower(word)) != std::string::npos; });
}

RosterResult parse_researcher_roster(const std::vector<RosterRecord>& records, const DesignationFilter& filter) {
  RosterResult out;
  std::set<std::string> usernames;
  for (const auto& r : records) {
    ++out.funnel.total_extracted;
    if (r.username.empty()) {
      ++out.funnel.invalid;
      out.issues.push_back({ErrorCode::parse_error, r.display_name, "roster record without username"});
      continue;
    }
    if (!usernames.insert(r.username).second) {
      ++out.funnel.duplicates_rejected;
      out.issues.push_back({ErrorCode::duplicate_username, r.username, "later record rejected"});
      continue;
    }
    if (filter.excludes(r.designation)) {
      ++out.funnel.removed_by_designation;
      continue;
    }
    ++out.funnel.remaining;

    ResearcherProfile p;
    p.user_id = r.user_id.empty() ? r.username : r.user_id;
    p.username = r.username;
    p.display_name = r.display_name;
    p.designation = r.designation;
    p.role = r.role;
    p.raw_skills_by_source = {{std::string(kSiteSource), r.skills_site},
                              {std::string(kScholarSource), r.skills_scholar}};
    p.skills = build_skill_set(p.raw_skills_by_source);
    p.has_scholar_profile = !r.skills_scholar.empty();
    if (p.skills.empty()) {
      ++out.funnel.without_skills;
      continue;
    }
    ++out.funnel.with_research_info;
    out.admitted.push_back(std::move(p));
  }
  return out;
}

// ---- awards -----------------------------------------------------------------

AwardParseResult parse_award_record(const MarkupElement& award) {
  AwardParseResult result;
  auto text_of = [&](std::string_view name) -> std::string {
    const auto* child = award.child(name);
    return child ? collapse_ws(child->text) : std::string();
  };
  AwardRecord a;
  a.award_number = text_of("number");
  if (a.award_number.empty()) {
    result.issues.push_back({ErrorCode::missing_award_number, text_of("title"), "award without <number>"});
    return result;
  }
  a.agency_id = text_of("agency");
  if (a.agency_id.empty()) {
    if (auto it = award.attributes.find("agency"); it != award.attributes.end()) a.agency_id = it->second;
  }
  a.title = text_of("title");
  a.synopsis = text_of("abstract");
  a.pi_username = text_of("pi");
  if (const auto amount = text_of("amount"); !amount.empty()) {
    a.amount = parse_money(amount);
    if (!a.amount) result.issues.push_back({ErrorCode::parse_error, a.award_number, "unreadable amount: " + amount});
  }
  if (const auto year = text_of("year"); !year.empty()) {
    auto [ptr, ec] = std::from_chars(year.data(), year.data() + year.size(), a.year);
    if (ec != std::errc{} || ptr != year.data() + year.size()) {
      a.year = 0;
      result.issues.push_back({ErrorCode::parse_error, a.award_number, "unreadable year: " + year});
    }
  }
  result.record = std::move(a);
  return result;
}

AwardParseResult parse_award_record(std::string_view markup) {
  const MarkupElement root = parse_markup(markup);
  if (root.name != "award") throw Error(ErrorCode::parse_error, "expected <award>, got <" + root.name + ">");
  return parse_award_record(root);
}

AwardCorpusResult parse_award_corpus(std::string_view document) {
  AwardCorpusResult out;
  const MarkupElement root = parse_markup(document);
  std::vector<const MarkupElement*> entries;
  if (root.name == "award") {
    entries.push_back(&root);
  } else {
    entries = root.children_named("award");
  }
  std::set<std::string> seen;
  for (const auto* entry : entries) {
    ++out.total_records;
    auto parsed = parse_award_record(*entry);
    out.issues.insert(out.issues.end(), parsed.issues.begin(), parsed.issues.end());
    if (!parsed.record) {
      ++out.rejected;
      continue;
    }
    if (!seen.insert(parsed.record->award_number).second) {
      ++out.rejected;
      out.issues.push_back({ErrorCode::duplicate_id, parsed.record->award_number, "duplicate award number"});
      continue;
    }
    out.awards.push_back(std::move(*parsed.record));
  }
  return out;
}

// ---- statistics -------------------------------------------------------------

int FieldTally::percent_tenths() const noexcept {
  if (total == 0) return 1000;
  return static_cast<int>((1000 * count) / total);
}

std::string FieldTally::percent_text() const {
  const int tenths = percent_tenths();
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

const FieldTally* ExtractionStats::field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.field == name) return &f;
  }
  return nullptr;
}

ExtractionStats& ExtractionStats::merge(const ExtractionStats& other) {
  for (const auto& f : other.fields) {
    auto it = std::find_if(fields.begin(), fields.end(), [&](const FieldTally& mine) { return mine.field == f.field; });
    if (it == fields.end()) {
      fields.push_back(f);
    } else {
      it->count += f.count;
      it->total += f.total;
    }
  }
  funnel.total_extracted += other.funnel.total_extracted;
  funnel.invalid += other.funnel.invalid;
  funnel.duplicates_rejected += other.funnel.duplicates_rejected;
  funnel.removed_by_designation += other.funnel.removed_by_designation;
  funnel.remaining += other.funnel.remaining;
  funnel.with_research_info += other.funnel.with_research_info;
  funnel.without_skills += other.funnel.without_skills;
  return *this;
}

ExtractionStats ingestion_report(const CallCorpusResult& calls, const RosterResult& roster,
                                 const AwardCorpusResult& awards) {
  std::int64_t titles = 0, deadlines = 0, budgets = 0, synopses = 0;
  for (const auto& c : calls.calls) {
    titles += c.title.has_value();
    deadlines += !c.deadlines.empty();
    budgets += c.budget_total.has_value();
    synopses += !c.synopsis.empty();
  }
  const std::int64_t call_total = calls.total_records;
  ExtractionStats stats;
  stats.fields = {
      {"RFP", static_cast<std::int64_t>(calls.calls.size()), call_total},
      {"Title", titles, call_total},
      {"Deadline", deadlines, call_total},
      {"Budget", budgets, call_total},
      {"Synopsis/Keywords", synopses, call_total},
      {"Users", roster.funnel.remaining, roster.funnel.remaining},
      {"Users/Research", roster.funnel.with_research_info, roster.funnel.remaining},
      {"Awards", static_cast<std::int64_t>(awards.awards.size()), awards.total_records},
  };
  stats.funnel = roster.funnel;
  return stats;
}

std::string render_stats_table(const ExtractionStats& stats) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-20s %8s %8s %12s\n", "Type", "Number", "Total", "% Extracted");
  out << line;
  for (const auto& f : stats.fields) {
    std::snprintf(line, sizeof line, "%-20s %8lld %8lld %12s%s\n", f.field.c_str(), static_cast<long long>(f.count),
                  static_cast<long long>(f.total), f.percent_text().c_str(), f.empty_denominator() ? " (empty)" : "");
    out << line;
  }
  const auto& fn = stats.funnel;
  out << "\nRoster: " << fn.total_extracted << " extracted, " << fn.invalid << " invalid, "
      << fn.duplicates_rejected << " duplicate, " << fn.removed_by_designation << " removed by designation, "
      << fn.remaining << " remaining, " << fn.with_research_info << " with research info, " << fn.without_skills
      << " without skills\n";
  return out.str();
}

}  // namespace teamrec
