#pragma once

#include <optional>
#include <string_view>

#include "agripv/civil_time.hpp"
#include "agripv/weather.hpp"

namespace agripv {

struct SunPosition {
    double zenith = 90.0;   // degrees, [0,180]
    double azimuth = 0.0;   // degrees clockwise from north, [0,360)
    bool is_up = false;     // zenith < 90

    /// Unit vector (east, north, up).
    double east() const;
    double north() const;
    double up() const;
    double elevation() const { return 90.0 - zenith; }
};

/// Orbital quantities used by both the position and the solar-time routines.
struct SolarEphemeris {
    double declination;       // degrees
    double equation_of_time;  // minutes
};

/// NOAA low-precision ephemeris evaluated at a UTC instant given as a
/// civil time plus its offset.
SolarEphemeris solar_ephemeris(const SiteConfig& site, CivilTime t);

/// Geometric (unrefracted) sun position.
SunPosition sun_position(const SiteConfig& site, CivilTime t);

/// True solar time of day in hours (12.0 at the sun's meridian transit).
double solar_time_hours(const SiteConfig& site, CivilTime t);

/// Civil time of the meridian transit on the given date.
CivilTime solar_noon(const SiteConfig& site, CivilDate date);

/// Sunrise-to-sunset length in hours for the given date (0 in polar night, 24 in polar day).
double daylight_hours(const SiteConfig& site, CivilDate date);

enum class TrackingMode { ST, AT, CT, NsFixed, EwVertical };

std::string_view to_string(TrackingMode mode);
TrackingMode parse_tracking_mode(std::string_view name);
bool is_tracked(TrackingMode mode);

struct TrackingScheme {
    TrackingMode mode = TrackingMode::ST;
    double st_hours = 0.0;                // CT only, hours/day in [0,24]
    double rotation_limit = 90.0;         // degrees, (0,90]
    std::optional<double> fixed_tilt;     // NS_FIXED; defaults to |latitude|

    void validate() const;
    static TrackingScheme standard(double limit = 90.0) { return {TrackingMode::ST, 0.0, limit, {}}; }
    static TrackingScheme anti(double limit = 90.0) { return {TrackingMode::AT, 0.0, limit, {}}; }
    static TrackingScheme customized(double n, double limit = 90.0) {
        return {TrackingMode::CT, n, limit, {}};
    }
    static TrackingScheme ns_fixed(std::optional<double> tilt = {}) {
        return {TrackingMode::NsFixed, 0.0, 90.0, tilt};
    }
    static TrackingScheme ew_vertical() { return {TrackingMode::EwVertical, 0.0, 90.0, {}}; }

    friend bool operator==(const TrackingScheme&, const TrackingScheme&) = default;
};

/// Direction the rows run. Trackers and vertical E/W modules use
/// north-south rows (cross-section axis points east); the equator-facing
/// fixed tilt uses east-west rows (cross-section axis points south).
enum class RowAxis { NorthSouth, EastWest };

/// Module attitude in the row cross-section. rotation < 0 tilts the front
/// normal toward the positive cross-section axis (east for north-south
/// rows, south for east-west rows).
struct RotationState {
    double rotation = 0.0;  // degrees
    RowAxis axis = RowAxis::NorthSouth;
    bool parked = false;    // sun below horizon, module held flat

    double surface_tilt() const;
    /// Azimuth of the front normal, degrees clockwise from north (0 when flat).
    double surface_azimuth() const;
};

/// Horizontal unit vector of the cross-section axis, as (east, north).
void section_axis(RowAxis axis, double& east, double& north);

/// Projection of the unit sun vector on the cross-section: component along
/// the axis and vertical component. Not normalised.
struct SectionBeam {
    double x = 0.0;
    double z = 0.0;
};
SectionBeam project_sun(const SunPosition& sun, RowAxis axis);

/// Rotation maximising front-face beam incidence about a horizontal N-S axis, clamped to +-limit.
RotationState st_rotation(const SunPosition& sun, double limit);

/// Orthogonal to st_rotation (module face parallel to the beam), clamped to +-limit.
RotationState at_rotation(const SunPosition& sun, double limit);

/// Rotation for any scheme at instant t. CT applies ST while the solar time
/// is within st_hours/2 of noon and AT otherwise. Night returns a parked state.
RotationState ct_rotation(const TrackingScheme& scheme, const SiteConfig& site, CivilTime t);

/// Attitude for the fixed schemes (NS_FIXED, EW_VERTICAL).
RotationState fixed_rotation(const TrackingScheme& scheme, const SiteConfig& site);

/// Fraction of [solar_start, solar_start + duration_h) (true solar hours)
/// inside the CT window [12 - n/2, 12 + n/2], wrapping at midnight.
double st_window_overlap(double st_hours, double solar_start, double duration_h = 1.0);

/// Fraction of the interval [start, start + duration_h) that lies inside the
/// CT standard-tracking window, measured in true solar time.
double st_window_fraction(double st_hours, const SiteConfig& site, CivilTime start,
                          double duration_h = 1.0);

/// Cosine of beam incidence on the front face (may be negative: beam on rear).
double incidence_cosine(const RotationState& rot, const SunPosition& sun);

}  // namespace agripv
