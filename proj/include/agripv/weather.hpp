#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "agripv/civil_time.hpp"

namespace agripv {

struct SiteConfig {
    std::string name = "site";
    double latitude = 0.0;    // degrees north
    double longitude = 0.0;   // degrees east
    double utc_offset = 0.0;  // hours
    double albedo = 0.25;

    void validate() const;
    friend bool operator==(const SiteConfig&, const SiteConfig&) = default;
};

/// One hourly record. The timestamp marks the start of the hour interval.
struct WeatherRecord {
    CivilTime time;
    double ghi = 0.0;  // W/m2
    double dni = 0.0;
    double dhi = 0.0;
};

struct WeatherSeries {
    SiteConfig site;
    std::vector<WeatherRecord> records;
};

enum class WeatherFormat { Csv, Epw };

WeatherFormat parse_weather_format(std::string_view name);
std::string_view to_string(WeatherFormat format);

inline constexpr double kComponentTolerance = 50.0;  // W/m2 slack on ghi <= dni + dhi
inline constexpr std::size_t kHoursPerYear = 8760;

/// Checks cadence, non-negativity, component consistency, and full-year
/// coverage. Throws ValidationError naming the first offending record, or
/// UnitError for a non-hourly cadence.
void validate_weather(const WeatherSeries& series);

/// Loads and validates an hourly series. CSV files carry the header
/// `timestamp,ghi,dni,dhi`; EPW files use the standard column positions.
WeatherSeries load_weather(const std::filesystem::path& path, WeatherFormat format,
                           const SiteConfig& site);

WeatherSeries parse_weather_csv(std::string_view text, const SiteConfig& site);
WeatherSeries parse_weather_epw(std::string_view text, const SiteConfig& site);

std::string weather_to_csv(const WeatherSeries& series);

}  // namespace agripv
