#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace teamrec {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  io_error,
  missing_synopsis,
  malformed_date,
  duplicate_username,
  duplicate_id,
  missing_award_number,
  empty_corpus,
  dimension_mismatch,
  unknown_id,
  unknown_user,
  illegal_change,
  duplicate_code,
  empty_file,
  integrity_violation,
  not_found,
  version_mismatch,
  version_conflict,
};

std::string_view to_string(ErrorCode code);

// Library-wide exception. Record-level ingestion problems are reported as
// values (IngestIssue) instead; this is for calls that cannot proceed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Whole US dollars.
struct Money {
  std::int64_t dollars = 0;

  friend auto operator<=>(const Money&, const Money&) = default;
};

// "$6,000,000"
std::string format_money(Money amount);

// A proleptic Gregorian calendar date. Only valid dates can be constructed
// through the factory functions.
class Date {
 public:
  Date() = default;

  static std::optional<Date> from_ymd(int year, unsigned month, unsigned day);
  // YYYY-MM-DD
  static std::optional<Date> parse_iso(std::string_view text);
  static Date today();

  int year() const noexcept { return year_; }
  unsigned month() const noexcept { return month_; }
  unsigned day() const noexcept { return day_; }

  std::string iso() const;

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  Date(int y, unsigned m, unsigned d) : year_(y), month_(m), day_(d) {}

  int year_ = 1970;
  unsigned month_ = 1;
  unsigned day_ = 1;
};

// round(num / den) with halves rounded up. Both arguments non-negative,
// den > 0.
constexpr std::int64_t round_half_up_ratio(std::int64_t num, std::int64_t den) {
  return (2 * num + den) / (2 * den);
}

// round(100 * fraction) with halves rounded up, clamped to [0, 100].
int round_half_up_percent(double fraction);

}  // namespace teamrec
