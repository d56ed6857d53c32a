#pragma once

#include <cstdint>
#include <string>

namespace tagdyn {

inline constexpr std::int64_t kSecondsPerDay = 86400;

// Strict "YYYY-MM-DDTHH:MM:SSZ" (UTC, second resolution) <-> epoch seconds.
// Throws std::invalid_argument on any deviation from that shape.
std::int64_t parse_timestamp(const std::string& iso);
std::string format_timestamp(std::int64_t epoch_seconds);

// Proleptic-Gregorian day arithmetic (days since 1970-01-01).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

}  // namespace tagdyn
