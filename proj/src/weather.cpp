#include "agripv/weather.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "agripv/error.hpp"

namespace agripv {

void SiteConfig::validate() const {
    if (!(latitude >= -90.0 && latitude <= 90.0))
        throw RangeError(fmt::format("site.latitude out of range [-90,90]: {}", latitude));
    if (!(longitude >= -180.0 && longitude <= 180.0))
        throw RangeError(fmt::format("site.longitude out of range [-180,180]: {}", longitude));
    if (!(utc_offset >= -14.0 && utc_offset <= 14.0))
        throw RangeError(fmt::format("site.utc_offset out of range [-14,14]: {}", utc_offset));
    if (!(albedo >= 0.0 && albedo <= 1.0))
        throw RangeError(fmt::format("site.albedo out of range [0,1]: {}", albedo));
}

WeatherFormat parse_weather_format(std::string_view name) {
    if (name == "csv") return WeatherFormat::Csv;
    if (name == "epw") return WeatherFormat::Epw;
    throw SchemaError(fmt::format("unknown weather format '{}' (expected csv or epw)", name));
}

std::string_view to_string(WeatherFormat format) {
    return format == WeatherFormat::Csv ? "csv" : "epw";
}

void validate_weather(const WeatherSeries& series) {
    const auto& recs = series.records;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        const long idx = static_cast<long>(i);
        if (!std::isfinite(r.ghi) || !std::isfinite(r.dni) || !std::isfinite(r.dhi))
            throw ValidationError(fmt::format("record {}: non-finite irradiance", i), idx);
        if (r.ghi < 0.0 || r.dni < 0.0 || r.dhi < 0.0)
            throw ValidationError(
                fmt::format("record {}: negative irradiance (ghi={}, dni={}, dhi={})", i, r.ghi,
                            r.dni, r.dhi),
                idx);
        if (r.ghi > r.dni + r.dhi + kComponentTolerance)
            throw ValidationError(
                fmt::format("record {}: ghi {} exceeds dni + dhi + {} W/m2", i, r.ghi,
                            kComponentTolerance),
                idx);
        if (i > 0) {
            const auto step = r.time - recs[i - 1].time;
            if (step <= std::chrono::seconds{0})
                throw ValidationError(
                    fmt::format("record {}: timestamp {} not after previous", i,
                                format_iso8601(r.time)),
                    idx);
            if (step > std::chrono::hours{1})
                throw ValidationError(
                    fmt::format("record {}: gap of {} s before {}", i, step.count(),
                                format_iso8601(r.time)),
                    idx);
            if (step != std::chrono::hours{1})
                throw UnitError(fmt::format("record {}: cadence of {} s is not hourly", i,
                                            step.count()));
        }
    }
    if (recs.size() < kHoursPerYear)
        throw ValidationError(
            fmt::format("series covers {} hourly records; a full year needs {}", recs.size(),
                        kHoursPerYear),
            static_cast<long>(recs.size()));
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view field, std::size_t row, std::string_view column) {
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(fmt::format("row {}: malformed {} value '{}'", row, column, field));
    return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        fn(line_no++, trim(text.substr(start, end - start)));
        start = end + 1;
    }
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot open weather file '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

WeatherSeries parse_weather_csv(std::string_view text, const SiteConfig& site) {
    WeatherSeries series{site, {}};
    bool header_seen = false;
    int col_ts = -1, col_ghi = -1, col_dni = -1, col_dhi = -1;
    std::size_t width = 0;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line.empty() || line.front() == '#') return;
        const auto fields = split(line, ',');
        if (!header_seen) {
            for (std::size_t c = 0; c < fields.size(); ++c) {
                const auto name = trim(fields[c]);
                const int ci = static_cast<int>(c);
                if (name == "timestamp") col_ts = ci;
                else if (name == "ghi") col_ghi = ci;
                else if (name == "dni") col_dni = ci;
                else if (name == "dhi") col_dhi = ci;
            }
            if (col_ts < 0 || col_ghi < 0 || col_dni < 0 || col_dhi < 0)
                throw ParseError("weather CSV header must contain timestamp,ghi,dni,dhi");
            width = fields.size();
            header_seen = true;
            return;
        }
        const std::size_t row = series.records.size();
        if (fields.size() != width)
            throw ParseError(fmt::format("row {} (line {}): expected {} fields, got {}", row,
                                         line_no + 1, width, fields.size()));
        WeatherRecord rec;
        try {
            rec.time = parse_iso8601(fields[static_cast<std::size_t>(col_ts)]);
        } catch (const ParseError& e) {
            throw ParseError(fmt::format("row {}: {}", row, e.what()));
        }
        rec.ghi = parse_number(fields[static_cast<std::size_t>(col_ghi)], row, "ghi");
        rec.dni = parse_number(fields[static_cast<std::size_t>(col_dni)], row, "dni");
        rec.dhi = parse_number(fields[static_cast<std::size_t>(col_dhi)], row, "dhi");
        series.records.push_back(rec);
    });
    if (!header_seen) throw ParseError("weather CSV is empty");
    validate_weather(series);
    return series;
}

WeatherSeries parse_weather_epw(std::string_view text, const SiteConfig& site) {
    // EPW: 8 header lines, then comma-separated rows. Zero-based columns:
    // 0 year, 1 month, 2 day, 3 hour (1..24, hour ending), 13 GHI, 14 DNI, 15 DHI.
    // TMY files splice months from different years; all rows are mapped onto
    // the year of the first data row so timestamps increase monotonically.
    constexpr std::size_t kHeaderLines = 8;
    WeatherSeries series{site, {}};
    int base_year = 0;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (line_no < kHeaderLines || line.empty()) return;
        const std::size_t row = series.records.size();
        const auto f = split(line, ',');
        if (f.size() < 16)
            throw ParseError(fmt::format("EPW row {} (line {}): expected >= 16 fields, got {}", row,
                                         line_no + 1, f.size()));
        const int year = static_cast<int>(parse_number(f[0], row, "year"));
        const int month = static_cast<int>(parse_number(f[1], row, "month"));
        const int day = static_cast<int>(parse_number(f[2], row, "day"));
        const int hour = static_cast<int>(parse_number(f[3], row, "hour"));
        if (row == 0) base_year = year;
        if (month < 1 || month > 12 || day < 1 || day > 31 || hour < 1 || hour > 24)
            throw ParseError(fmt::format("EPW row {}: date/hour field out of range", row));
        WeatherRecord rec;
        rec.time = make_civil(base_year, static_cast<unsigned>(month), static_cast<unsigned>(day),
                              hour - 1);
        rec.ghi = parse_number(f[13], row, "ghi");
        rec.dni = parse_number(f[14], row, "dni");
        rec.dhi = parse_number(f[15], row, "dhi");
        series.records.push_back(rec);
    });
    validate_weather(series);
    return series;
}

WeatherSeries load_weather(const std::filesystem::path& path, WeatherFormat format,
                           const SiteConfig& site) {
    site.validate();
    const std::string text = slurp(path);
    return format == WeatherFormat::Csv ? parse_weather_csv(text, site)
                                        : parse_weather_epw(text, site);
}

std::string weather_to_csv(const WeatherSeries& series) {
    std::string out = "timestamp,ghi,dni,dhi\n";
    out.reserve(series.records.size() * 48);
    for (const auto& r : series.records)
        out += fmt::format("{},{},{},{}\n", format_iso8601(r.time), r.ghi, r.dni, r.dhi);
    return out;
}

}  // namespace agripv
