#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "agripv/synthetic.hpp"
#include "agripv/solar.hpp"

namespace agripv {

namespace {

struct Ashrae {
    double a, b, c;
};

// Apparent extraterrestrial beam (W/m2), optical depth, diffuse ratio.
constexpr std::array<Ashrae, 12> kAshrae{{
    {1230, 0.142, 0.058}, {1215, 0.144, 0.060}, {1186, 0.156, 0.071}, {1136, 0.180, 0.097},
    {1104, 0.196, 0.121}, {1088, 0.205, 0.134}, {1085, 0.207, 0.136}, {1107, 0.201, 0.122},
    {1151, 0.177, 0.092}, {1192, 0.160, 0.073}, {1221, 0.149, 0.063}, {1233, 0.142, 0.057},
}};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

WeatherSeries synthetic_weather(const SiteConfig& site, const SyntheticWeatherParams& params) {
    using namespace std::chrono;
    site.validate();
    WeatherSeries series;
    series.site = site;
    std::mt19937_64 rng(params.seed);
    const int shift = site.latitude < 0.0 ? 6 : 0;
    const local_days first{year{params.year} / January / 1};
    const local_days last{year{params.year + 1} / January / 1};
    for (local_days day = first; day < last; day += days{1}) {
        const int m = month_index(CivilTime{day});
        const int season = (m + shift) % 12;
        const double factor = std::clamp(
            params.beam_factor[static_cast<std::size_t>(season)] + params.daily_spread * (2.0 * unit_uniform(rng) - 1.0),
            0.05, 1.0);
        const Ashrae& k = kAshrae[static_cast<std::size_t>(season)];
        for (int h = 0; h < 24; ++h) {
            WeatherRecord r;
            r.time = CivilTime{day} + hours{h};
            const SunPosition sun = sun_position(site, r.time + minutes{30});
            if (sun.is_up && sun.up() > 0.01) {
                const double cz = sun.up();
                const double clear = k.a * std::exp(-k.b / cz);
                r.dni = factor * clear;
                r.dhi = k.c * clear + params.lost_beam_to_diffuse * (1.0 - factor) * clear * cz;
                r.ghi = r.dni * cz + r.dhi;
            }
            series.records.push_back(r);
        }
    }
    return series;
}

SiteConfig khanewal_site() { return {"Khanewal", 30.2864, 71.9320, 5.0, 0.25}; }

SiteConfig sydney_site() { return {"Sydney", -33.8688, 151.2093, 10.0, 0.25}; }

}  // namespace agripv
