#include "agripv/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "agripv/error.hpp"

namespace agripv {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap360(double deg) {
    double r = std::fmod(deg, 360.0);
    return r < 0.0 ? r + 360.0 : r;
}

// Julian day of the UTC instant corresponding to civil time t at the site.
double julian_day(const SiteConfig& site, CivilTime t) {
    const double local_s = static_cast<double>(t.time_since_epoch().count());
    const double utc_s = local_s - site.utc_offset * 3600.0;
    return utc_s / 86400.0 + 2440587.5;
}

struct Ephemeris {
    double declination;  // rad
    double eot_min;
};

Ephemeris ephemeris_at(double jd) {
    const double T = (jd - 2451545.0) / 36525.0;
    const double L0 = wrap360(280.46646 + T * (36000.76983 + 0.0003032 * T));
    const double M = 357.52911 + T * (35999.05029 - 0.0001537 * T);
    const double e = 0.016708634 - T * (0.000042037 + 0.0000001267 * T);
    const double Mr = M * kDeg;
    const double C = std::sin(Mr) * (1.914602 - T * (0.004817 + 0.000014 * T)) +
                     std::sin(2 * Mr) * (0.019993 - 0.000101 * T) + std::sin(3 * Mr) * 0.000289;
    const double omega = (125.04 - 1934.136 * T) * kDeg;
    const double lambda = (L0 + C - 0.00569 - 0.00478 * std::sin(omega)) * kDeg;
    const double eps0 = 23.0 + (26.0 + (21.448 - T * (46.815 + T * (0.00059 - T * 0.001813))) / 60.0) / 60.0;
    const double eps = (eps0 + 0.00256 * std::cos(omega)) * kDeg;
    const double decl = std::asin(std::sin(eps) * std::sin(lambda));
    const double y = std::pow(std::tan(eps / 2.0), 2);
    const double L0r = L0 * kDeg;
    const double eot = y * std::sin(2 * L0r) - 2 * e * std::sin(Mr) +
                       4 * e * y * std::sin(Mr) * std::cos(2 * L0r) -
                       0.5 * y * y * std::sin(4 * L0r) - 1.25 * e * e * std::sin(2 * Mr);
    return {decl, 4.0 * eot / kDeg};
}

double solar_time_from(const SiteConfig& site, CivilTime t, double eot_min) {
    const double clock_min = hour_of_day(t) * 60.0;
    const double tst = clock_min + eot_min + 4.0 * site.longitude - 60.0 * site.utc_offset;
    double h = std::fmod(tst / 60.0, 24.0);
    return h < 0.0 ? h + 24.0 : h;
}

}  // namespace

double SunPosition::east() const {
    return std::sin(zenith * kDeg) * std::sin(azimuth * kDeg);
}
double SunPosition::north() const {
    return std::sin(zenith * kDeg) * std::cos(azimuth * kDeg);
}
double SunPosition::up() const { return std::cos(zenith * kDeg); }

SolarEphemeris solar_ephemeris(const SiteConfig& site, CivilTime t) {
    const auto e = ephemeris_at(julian_day(site, t));
    return {e.declination / kDeg, e.eot_min};
}

SunPosition sun_position(const SiteConfig& site, CivilTime t) {
    const auto eph = ephemeris_at(julian_day(site, t));
    const double hour_angle = (solar_time_from(site, t, eph.eot_min) - 12.0) * 15.0 * kDeg;
    const double lat = site.latitude * kDeg;
    const double cos_zen = std::clamp(std::sin(lat) * std::sin(eph.declination) +
                                          std::cos(lat) * std::cos(eph.declination) * std::cos(hour_angle),
                                      -1.0, 1.0);
    SunPosition sun;
    sun.zenith = std::acos(cos_zen) / kDeg;
    // Meeus: azimuth measured westward from south; shift to clockwise from north.
    const double az_south = std::atan2(std::sin(hour_angle), std::cos(hour_angle) * std::sin(lat) -
                                                                 std::tan(eph.declination) * std::cos(lat));
    sun.azimuth = wrap360(az_south / kDeg + 180.0);
    if (sun.azimuth >= 360.0) sun.azimuth = 0.0;
    sun.is_up = sun.zenith < 90.0;
    return sun;
}

double solar_time_hours(const SiteConfig& site, CivilTime t) {
    return solar_time_from(site, t, ephemeris_at(julian_day(site, t)).eot_min);
}

CivilTime solar_noon(const SiteConfig& site, CivilDate date) {
    // Two fixed-point passes: the equation of time changes by < 1 s/hour.
    double noon_min = 720.0;
    for (int pass = 0; pass < 2; ++pass) {
        const CivilTime guess = date + std::chrono::seconds{static_cast<long>(std::lround(noon_min * 60.0))};
        const double eot = ephemeris_at(julian_day(site, guess)).eot_min;
        noon_min = 720.0 - eot - 4.0 * site.longitude + 60.0 * site.utc_offset;
    }
    return date + std::chrono::seconds{static_cast<long>(std::lround(noon_min * 60.0))};
}

double daylight_hours(const SiteConfig& site, CivilDate date) {
    const CivilTime noon = solar_noon(site, date);
    const double decl = ephemeris_at(julian_day(site, noon)).declination;
    const double x = -std::tan(site.latitude * kDeg) * std::tan(decl);
    if (x >= 1.0) return 0.0;
    if (x <= -1.0) return 24.0;
    return 2.0 * std::acos(x) / kDeg / 15.0;
}

std::string_view to_string(TrackingMode mode) {
    switch (mode) {
    case TrackingMode::ST: return "ST";
    case TrackingMode::AT: return "AT";
    case TrackingMode::CT: return "CT";
    case TrackingMode::NsFixed: return "NS_FIXED";
    case TrackingMode::EwVertical: return "EW_VERTICAL";
    }
    return "?";
}

TrackingMode parse_tracking_mode(std::string_view name) {
    if (name == "ST") return TrackingMode::ST;
    if (name == "AT") return TrackingMode::AT;
    if (name == "CT") return TrackingMode::CT;
    if (name == "NS_FIXED" || name == "N/S") return TrackingMode::NsFixed;
    if (name == "EW_VERTICAL" || name == "E/W") return TrackingMode::EwVertical;
    throw SchemaError(fmt::format("unknown tracking mode '{}'", name));
}

bool is_tracked(TrackingMode mode) {
    return mode == TrackingMode::ST || mode == TrackingMode::AT || mode == TrackingMode::CT;
}

void TrackingScheme::validate() const {
    if (!(rotation_limit > 0.0 && rotation_limit <= 90.0))
        throw RangeError(fmt::format("scheme.rotation_limit must be in (0,90]: {}", rotation_limit));
    if (mode == TrackingMode::CT && !(st_hours >= 0.0 && st_hours <= 24.0))
        throw RangeError(fmt::format("scheme.st_hours must be in [0,24]: {}", st_hours));
    if (mode != TrackingMode::CT && st_hours != 0.0)
        throw SchemaError("scheme.st_hours is only valid for mode CT");
    if (fixed_tilt) {
        if (mode != TrackingMode::NsFixed)
            throw SchemaError("scheme.fixed_tilt is only valid for mode NS_FIXED");
        if (!(*fixed_tilt >= 0.0 && *fixed_tilt <= 90.0))
            throw RangeError(fmt::format("scheme.fixed_tilt must be in [0,90]: {}", *fixed_tilt));
    }
}

double RotationState::surface_tilt() const { return std::abs(rotation); }

double RotationState::surface_azimuth() const {
    if (rotation == 0.0) return 0.0;
    const bool toward_axis = rotation < 0.0;
    if (axis == RowAxis::NorthSouth) return toward_axis ? 90.0 : 270.0;
    return toward_axis ? 180.0 : 0.0;
}

void section_axis(RowAxis axis, double& east, double& north) {
    if (axis == RowAxis::NorthSouth) {
        east = 1.0;
        north = 0.0;
    } else {
        east = 0.0;
        north = -1.0;
    }
}

SectionBeam project_sun(const SunPosition& sun, RowAxis axis) {
    double ae = 0.0, an = 0.0;
    section_axis(axis, ae, an);
    return {sun.east() * ae + sun.north() * an, sun.up()};
}

namespace {

double st_angle_unclamped(const SunPosition& sun) {
    const auto beam = project_sun(sun, RowAxis::NorthSouth);
    return -std::atan2(beam.x, beam.z) / kDeg;
}

void require_up(const SunPosition& sun, const char* what) {
    if (!sun.is_up)
        throw DomainError(fmt::format("{}: sun below horizon (zenith {:.3f})", what, sun.zenith));
}

}  // namespace

RotationState st_rotation(const SunPosition& sun, double limit) {
    require_up(sun, "st_rotation");
    return {std::clamp(st_angle_unclamped(sun), -limit, limit), RowAxis::NorthSouth, false};
}

RotationState at_rotation(const SunPosition& sun, double limit) {
    require_up(sun, "at_rotation");
    const double st = st_angle_unclamped(sun);
    const double at = st == 0.0 ? 90.0 : st - std::copysign(90.0, st);
    return {std::clamp(at, -limit, limit), RowAxis::NorthSouth, false};
}

RotationState fixed_rotation(const TrackingScheme& scheme, const SiteConfig& site) {
    if (scheme.mode == TrackingMode::NsFixed) {
        const double tilt = scheme.fixed_tilt.value_or(std::abs(site.latitude));
        // Face the equator: toward +axis (south) in the northern hemisphere.
        return {site.latitude >= 0.0 ? -tilt : tilt, RowAxis::EastWest, false};
    }
    if (scheme.mode == TrackingMode::EwVertical) return {-90.0, RowAxis::NorthSouth, false};
    throw DomainError(fmt::format("fixed_rotation: mode {} is tracked", to_string(scheme.mode)));
}

RotationState ct_rotation(const TrackingScheme& scheme, const SiteConfig& site, CivilTime t) {
    if (!is_tracked(scheme.mode)) return fixed_rotation(scheme, site);
    const SunPosition sun = sun_position(site, t);
    if (!sun.is_up) return {0.0, RowAxis::NorthSouth, true};
    switch (scheme.mode) {
    case TrackingMode::ST: return st_rotation(sun, scheme.rotation_limit);
    case TrackingMode::AT: return at_rotation(sun, scheme.rotation_limit);
    default: break;
    }
    const double from_noon = std::abs(solar_time_hours(site, t) - 12.0);
    return from_noon <= scheme.st_hours / 2.0 ? st_rotation(sun, scheme.rotation_limit)
                                              : at_rotation(sun, scheme.rotation_limit);
}

double st_window_overlap(double st_hours, double solar_start, double duration_h) {
    if (duration_h <= 0.0) return 0.0;
    const double n = std::clamp(st_hours, 0.0, 24.0);
    if (n == 0.0) return 0.0;
    if (n == 24.0) return 1.0;
    const double s1 = solar_start + duration_h;
    double overlap = 0.0;
    for (double shift : {-24.0, 0.0, 24.0}) {
        const double lo = std::max(solar_start, 12.0 - n / 2.0 + shift);
        const double hi = std::min(s1, 12.0 + n / 2.0 + shift);
        if (hi > lo) overlap += hi - lo;
    }
    return std::clamp(overlap / duration_h, 0.0, 1.0);
}

double st_window_fraction(double st_hours, const SiteConfig& site, CivilTime start,
                          double duration_h) {
    return st_window_overlap(st_hours, solar_time_hours(site, start), duration_h);
}

double incidence_cosine(const RotationState& rot, const SunPosition& sun) {
    const auto beam = project_sun(sun, rot.axis);
    const double r = rot.rotation * kDeg;
    return -std::sin(r) * beam.x + std::cos(r) * beam.z;
}

}  // namespace agripv
