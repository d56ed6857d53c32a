#include "tagdyn/timeutil.hpp"

#include <cstdio>
#include <stdexcept>

namespace tagdyn {

namespace {

// Hinnant's civil-date algorithms.
std::int64_t days_from_civil_impl(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp + (mp < 10 ? 3 : -9);
  year = static_cast<int>(y + (month <= 2));
}

unsigned last_day_of_month(int year, unsigned month) {
  static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30,
                                         31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
    return leap ? 29 : 28;
  }
  return lengths[month - 1];
}

int digits_at(const std::string& s, std::size_t pos, std::size_t n) {
  int value = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9')
      throw std::invalid_argument("bad timestamp: " + s);
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
  return days_from_civil_impl(year, month, day);
}

std::int64_t parse_timestamp(const std::string& iso) {
  // YYYY-MM-DDTHH:MM:SSZ, exactly 20 chars.
  if (iso.size() != 20 || iso[4] != '-' || iso[7] != '-' || iso[10] != 'T' ||
      iso[13] != ':' || iso[16] != ':' || iso[19] != 'Z')
    throw std::invalid_argument("bad timestamp: " + iso);
  const int year = digits_at(iso, 0, 4);
  const int month = digits_at(iso, 5, 2);
  const int day = digits_at(iso, 8, 2);
  const int hour = digits_at(iso, 11, 2);
  const int minute = digits_at(iso, 14, 2);
  const int second = digits_at(iso, 17, 2);
  if (month < 1 || month > 12)
    throw std::invalid_argument("bad timestamp month: " + iso);
  if (day < 1 ||
      static_cast<unsigned>(day) > last_day_of_month(year, static_cast<unsigned>(month)))
    throw std::invalid_argument("bad timestamp day: " + iso);
  if (hour > 23 || minute > 59 || second > 59)
    throw std::invalid_argument("bad timestamp time: " + iso);
  return days_from_civil_impl(year, static_cast<unsigned>(month),
                              static_cast<unsigned>(day)) *
             kSecondsPerDay +
         hour * 3600 + minute * 60 + second;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / kSecondsPerDay;
  std::int64_t rem = epoch_seconds % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    days -= 1;
  }
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year,
                month, day, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace tagdyn
