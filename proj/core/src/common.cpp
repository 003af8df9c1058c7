#include "teamrec/common.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace teamrec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::missing_synopsis: return "missing_synopsis";
    case ErrorCode::malformed_date: return "malformed_date";
    case ErrorCode::duplicate_username: return "duplicate_username";
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::missing_award_number: return "missing_award_number";
    case ErrorCode::empty_corpus: return "empty_corpus";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::unknown_id: return "unknown_id";
    case ErrorCode::unknown_user: return "unknown_user";
    case ErrorCode::illegal_change: return "illegal_change";
    case ErrorCode::duplicate_code: return "duplicate_code";
    case ErrorCode::empty_file: return "empty_file";
    case ErrorCode::integrity_violation: return "integrity_violation";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::version_mismatch: return "version_mismatch";
    case ErrorCode::version_conflict: return "version_conflict";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

std::string format_money(Money amount) {
  std::string digits = std::to_string(amount.dollars < 0 ? -amount.dollars : amount.dollars);
  std::string out;
  out.reserve(digits.size() + digits.size() / 3 + 2);
  if (amount.dollars < 0) out += '-';
  out += '$';
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::optional<Date> Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok() || year < 1 || year > 9999) return std::nullopt;
  return Date(year, month, day);
}

std::optional<Date> Date::parse_iso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
  };
  int y = 0, m = 0, d = 0;
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
  if (m < 1 || d < 1) return std::nullopt;
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

Date Date::today() {
  const auto now = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  const std::chrono::year_month_day ymd{now};
  return Date(static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
              static_cast<unsigned>(ymd.day()));
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_, month_, day_);
  return buf;
}

int round_half_up_percent(double fraction) {
  const double scaled = std::floor(100.0 * fraction + 0.5);
  return static_cast<int>(std::clamp(scaled, 0.0, 100.0));
}

}  // namespace teamrec
