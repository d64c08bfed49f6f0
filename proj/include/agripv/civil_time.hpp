#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace agripv {

// Civil (wall-clock) local time of the site. Conversion to UTC uses the
// site's fixed utc_offset; daylight saving is not modelled.
using CivilTime = std::chrono::local_seconds;
using CivilDate = std::chrono::local_days;

CivilTime make_civil(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                     int second = 0);

/// Parses "YYYY-MM-DDTHH:MM[:SS]" (a space is accepted in place of 'T').
/// Throws ParseError on malformed input.
CivilTime parse_iso8601(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SS".
std::string format_iso8601(CivilTime t);

std::chrono::year_month_day civil_ymd(CivilTime t);

/// Calendar month index 0..11.
int month_index(CivilTime t);

/// Day of year, 1-based.
int day_of_year(CivilTime t);

/// Hours since local midnight, fractional.
double hour_of_day(CivilTime t);

}  // namespace agripv
