#pragma once

#include <array>
#include <cstdint>

#include "agripv/weather.hpp"

namespace agripv {

/// Parameters of a deterministic synthetic hourly year built from the
/// ASHRAE clear-sky model with a daily beam attenuation factor.
struct SyntheticWeatherParams {
    int year = 2021;
    std::uint64_t seed = 20240601;
    /// Monthly mean fraction of clear-sky beam that reaches the ground,
    /// indexed by local-season month (January = mid-winter).
    std::array<double, 12> beam_factor{0.70, 0.78, 0.80, 0.82, 0.82, 0.78, 0.62, 0.62, 0.78, 0.85, 0.80, 0.70};
    double daily_spread = 0.15;  // +- uniform variation of the daily factor
    double lost_beam_to_diffuse = 0.4;
};

/// 8760 (or 8784) hourly records for the site. Southern-hemisphere sites
/// use the season-shifted coefficient tables.
WeatherSeries synthetic_weather(const SiteConfig& site, const SyntheticWeatherParams& params = {});

SiteConfig khanewal_site();
SiteConfig sydney_site();

}  // namespace agripv
