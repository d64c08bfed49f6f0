#pragma once

#include <array>
#include <optional>
#include <vector>

#include "agripv/crops.hpp"
#include "agripv/solar.hpp"
#include "agripv/weather.hpp"

namespace agripv {

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

enum class Density { FD, HD, TD };

/// Land-to-module ratio of the full/half/one-third density presets.
double density_a_lm(Density d);

struct ArrayLayout {
    double pitch = 4.0;         // m, row-to-row distance
    double module_width = 2.0;  // m, chord of one row in the cross-section
    double hub_height = 3.0;    // m, height of the rotation axis / module centre
    /// Weight of rear-face irradiance in module energy. Unset: 1 for
    /// EW_VERTICAL, 0 (monofacial) otherwise.
    std::optional<double> bifacial_rear_weight;
    int ground_points = 100;

    double a_lm() const { return pitch / module_width; }
    static ArrayLayout from_a_lm(double a_lm, double module_width = 2.0, double hub_height = 3.0);

    /// pitch >= module_width > 0, hub_height >= 0, rear weight in [0,1],
    /// ground_points >= 32. Ground clearance depends on the scheme; see
    /// check_clearance.
    void validate() const;

    friend bool operator==(const ArrayLayout&, const ArrayLayout&) = default;
};

double rear_weight_for(const ArrayLayout& layout, TrackingMode mode);

/// Largest |rotation| the scheme reaches at this site.
double max_rotation(const TrackingScheme& scheme, const SiteConfig& site);

/// Throws RangeError when a module edge would touch the ground at the
/// scheme's largest rotation.
void check_clearance(const ArrayLayout& layout, const TrackingScheme& scheme, const SiteConfig& site);

// ---------------------------------------------------------------------------
// Cross-section geometry
// ---------------------------------------------------------------------------

/// One row at a given rotation, centred at x = 0, height hub_height.
struct SectionGeometry {
    double pitch = 0.0;
    double width = 0.0;
    double nx = 0.0, nz = 1.0;  // front normal
    double tx = 1.0, tz = 0.0;  // chord direction
    double x1 = 0.0, z1 = 0.0;  // endpoint at -width/2 along the chord
    double x2 = 0.0, z2 = 0.0;  // endpoint at +width/2

    double zmin() const { return z1 < z2 ? z1 : z2; }
    double zmax() const { return z1 < z2 ? z2 : z1; }
};

SectionGeometry section_geometry(const ArrayLayout& layout, double rotation_deg);

/// Rows on each side used for ground sky view factors; the neglected tail
/// subtends less than ~1e-4 of the hemisphere.
int ground_rows_each_side(const SectionGeometry& g);

/// Ground sample positions across one pitch, centred under row 0.
std::vector<double> ground_points(const ArrayLayout& layout);

struct FaceViewFactors {
    double front_sky = 0.0;
    double front_ground = 0.0;
    double rear_sky = 0.0;
    double rear_ground = 0.0;
};

/// Chord-averaged isotropic view factors of both faces to unobstructed
/// sky and ground, with neighbouring rows masking.
FaceViewFactors module_view_factors(const SectionGeometry& g, int chord_samples = 8);

/// Fraction of the module chord not shaded from the beam by neighbouring rows.
double module_unshaded_fraction(const SectionGeometry& g, const SectionBeam& beam);

/// Length of the ground shadow cast by one row, and where it starts.
struct GroundShadow {
    double start = 0.0;
    double length = 0.0;
};
GroundShadow ground_shadow(const SectionGeometry& g, const SectionBeam& beam);

/// Direct-beam flux balance over one pitch, per metre of row and per W/m2 of DNI scaled by dni.
struct BeamBudget {
    double incident = 0.0;            // through the horizontal plane
    double module_intercepted = 0.0;  // on the module faces
    double ground = 0.0;              // reaching the ground
};
BeamBudget beam_budget(const ArrayLayout& layout, const RotationState& rotation,
                       const SunPosition& sun, double dni);

// ---------------------------------------------------------------------------
// Per-timestep irradiance
// ---------------------------------------------------------------------------

struct GroundProfile {
    std::vector<double> points;      // m, one pitch
    std::vector<double> irradiance;  // W/m2
    double unshaded_ghi = 0.0;       // W/m2 on open ground

    double mean() const;
};

struct PlaneOfArray {
    double front = 0.0;  // W/m2
    double rear = 0.0;
};

/// Ground irradiance: beam where not shadowed plus sky diffuse through the
/// gaps between rows. Module surfaces are non-reflecting.
GroundProfile ground_profile(const ArrayLayout& layout, const RotationState& rotation,
                             const WeatherRecord& weather, const SunPosition& sun, int points);

/// Mean ground irradiance over unshaded GHI. Throws DomainError at night.
double shading_ratio(const GroundProfile& profile);

/// Front/rear POA from beam (less neighbour shading), isotropic sky diffuse,
/// and ground-reflected light at the given mean ground irradiance.
PlaneOfArray poa_irradiance(const ArrayLayout& layout, const RotationState& rotation,
                            const WeatherRecord& weather, const SunPosition& sun, double albedo,
                            double mean_ground_irradiance);

/// As above, computing the mean ground irradiance from the ground profile.
PlaneOfArray poa_irradiance(const ArrayLayout& layout, const RotationState& rotation,
                            const WeatherRecord& weather, const SunPosition& sun, double albedo);

// ---------------------------------------------------------------------------
// Annual simulation
// ---------------------------------------------------------------------------

/// Sun state per weather record, evaluated at the middle of each hour.
struct SolarTimeline {
    SiteConfig site;
    std::vector<SunPosition> sun;
    std::vector<double> solar_start;  // true solar time (h) at the start of each record
    std::vector<int> month;
    std::vector<CivilTime> times;
};

SolarTimeline build_timeline(const WeatherSeries& weather);

struct TimestepYield {
    double front = 0.0;     // W/m2 (hourly mean == Wh/m2 per step)
    double rear = 0.0;
    double ground = 0.0;    // mean ground irradiance across the pitch
    double unshaded = 0.0;  // open-ground GHI
    double rotation = 0.0;  // degrees
};

/// Per-timestep results for a scheme whose attitude does not depend on the
/// CT window (ST, AT, NS_FIXED, EW_VERTICAL). Optionally keeps profiles.
std::vector<TimestepYield> run_scheme(const SolarTimeline& timeline, const WeatherSeries& weather,
                                      const ArrayLayout& layout, const TrackingScheme& scheme,
                                      std::vector<std::vector<double>>* profiles = nullptr);

/// Fraction of each record spent in the ST branch of CT(n).
std::vector<double> ct_weights(const SolarTimeline& timeline, double st_hours);

/// Blends ST and AT records: w * st + (1 - w) * at.
std::vector<TimestepYield> blend(const std::vector<TimestepYield>& st,
                                 const std::vector<TimestepYield>& at,
                                 const std::vector<double>& weights);

struct MonthlyAggregate {
    double av_energy = 0.0;         // Wh/m2 of module
    double reference_energy = 0.0;  // Wh/m2 of reference module
    double ground_sum = 0.0;        // Wh/m2 of ground
    double unshaded_sum = 0.0;
    double shading_ratio_mean = 0.0;  // time mean over daylight steps
    int daylight_steps = 0;
    int steps = 0;
};

struct YieldSeries {
    std::vector<CivilTime> times;
    std::vector<int> month;
    std::vector<TimestepYield> av;
    std::vector<TimestepYield> reference;
    std::vector<std::vector<double>> profiles;  // empty unless requested
    double av_rear_weight = 0.0;
    double reference_rear_weight = 0.0;
    std::array<MonthlyAggregate, 12> monthly{};

    double av_energy(std::size_t i) const { return av[i].front + av_rear_weight * av[i].rear; }
    double reference_energy(std::size_t i) const {
        return reference[i].front + reference_rear_weight * reference[i].rear;
    }
    /// Recomputes `monthly` from the per-step vectors.
    void aggregate();
    /// Annual reference module energy, kWh/m2/yr of irradiance (before conversion efficiency).
    double reference_annual_kwh() const;
};

/// The equator-facing fixed tilt at |latitude|, A_LM = 2, monofacial, same
/// module chord and hub height as `layout`.
ArrayLayout reference_layout(const ArrayLayout& layout);
TrackingScheme reference_scheme();

YieldSeries assemble(const SolarTimeline& timeline, std::vector<TimestepYield> av,
                     double av_rear_weight, std::vector<TimestepYield> reference,
                     std::vector<std::vector<double>> profiles = {});

struct SimulationRequest {
    ArrayLayout layout;
    TrackingScheme scheme;
    bool keep_profiles = false;
};

/// Simulates one year for the scheme and for the fixed-tilt reference.
YieldSeries simulate_year(const WeatherSeries& weather, const SimulationRequest& request);

/// Ratio of module energy per m2 to reference energy per m2 over the period.
double y_pv(const YieldSeries& series, const MonthSet& period);

}  // namespace agripv
