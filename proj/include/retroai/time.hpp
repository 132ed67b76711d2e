#ifndef RETROAI_TIME_HPP
#define RETROAI_TIME_HPP

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "retroai/error.hpp"

namespace retroai {

using Date = std::chrono::year_month_day;
using Instant = std::chrono::sys_seconds;

namespace detail {

inline bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

// Parses "YYYY-MM-DD".
inline Date parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !detail::parse_fixed_int(s, 0, 4, y) ||
      !detail::parse_fixed_int(s, 5, 2, m) || !detail::parse_fixed_int(s, 8, 2, d)) {
    throw InvalidArgumentError("invalid date '" + std::string(s) + "', expected YYYY-MM-DD");
  }
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) throw InvalidArgumentError("invalid calendar date '" + std::string(s) + "'");
  return date;
}

inline std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

// Parses "YYYY-MM-DDTHH:MM:SSZ" (UTC only).
inline Instant parse_instant(std::string_view s) {
  int hh = 0, mm = 0, ss = 0;
  if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z' ||
      !detail::parse_fixed_int(s, 11, 2, hh) || !detail::parse_fixed_int(s, 14, 2, mm) ||
      !detail::parse_fixed_int(s, 17, 2, ss) || hh > 23 || mm > 59 || ss > 59) {
    throw InvalidArgumentError("invalid timestamp '" + std::string(s) +
                               "', expected YYYY-MM-DDTHH:MM:SSZ");
  }
  Date date = parse_date(s.substr(0, 10));
  return std::chrono::sys_days{date} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

inline std::string format_instant(Instant t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::hh_mm_ss tod{t - day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()), static_cast<int>(tod.seconds().count()));
  return format_date(Date{day}) + buf;
}

// First instant after calendar day `date` ends in a zone `utc_offset_minutes`
// east of UTC. A timestamp t belongs to day `date` or earlier iff t < end_of_day(date).
inline Instant end_of_day(const Date& date, int utc_offset_minutes = 0) {
  return std::chrono::sys_days{date} + std::chrono::days{1} -
         std::chrono::minutes{utc_offset_minutes};
}

inline Date add_days(const Date& date, int days) {
  return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

inline int days_between(const Date& from, const Date& to) {
  return static_cast<int>((std::chrono::sys_days{to} - std::chrono::sys_days{from}).count());
}

inline Date today_utc() {
  return Date{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

inline Instant now_utc() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace retroai

#endif  // RETROAI_TIME_HPP
