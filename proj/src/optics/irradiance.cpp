#include <algorithm>
#include <numeric>

#include "agripv/error.hpp"
#include "agripv/kernels.hpp"
#include "agripv/optics.hpp"
#include "optics_internal.hpp"

namespace agripv {

double GroundProfile::mean() const {
    if (irradiance.empty()) return 0.0;
    return std::accumulate(irradiance.begin(), irradiance.end(), 0.0) / static_cast<double>(irradiance.size());
}

namespace detail {

void ground_irradiance(const SectionGeometry& g, RowAxis axis, const WeatherRecord& weather,
                       const SunPosition& sun, std::span<const double> xs, std::span<double> out,
                       std::span<double> scratch) {
    const kernels::RowSection rows{g.pitch, g.x1, g.z1, g.x2, g.z2, ground_rows_each_side(g)};
    kernels::sky_view(rows, xs, out);
    for (double& v : out) v *= weather.dhi;
    if (!sun.is_up || weather.dni <= 0.0) return;
    const auto beam = project_sun(sun, axis);
    const auto shadow = ground_shadow(g, beam);
    kernels::beam_mask({g.pitch, shadow.start, shadow.length}, xs, scratch);
    const double beam_h = weather.dni * beam.z;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += beam_h * scratch[i];
}

double unshaded_ghi(const WeatherRecord& weather, const SunPosition& sun) {
    const double beam_h = sun.is_up ? std::max(0.0, weather.dni) * sun.up() : 0.0;
    return beam_h + weather.dhi;
}

PlaneOfArray poa(const SectionGeometry& g, const FaceViewFactors& vf, const RotationState& rotation,
                 const WeatherRecord& weather, const SunPosition& sun, double albedo, double ground_mean) {
    PlaneOfArray out;
    const double reflected = albedo * ground_mean;
    out.front = weather.dhi * vf.front_sky + reflected * vf.front_ground;
    out.rear = weather.dhi * vf.rear_sky + reflected * vf.rear_ground;
    if (sun.is_up && weather.dni > 0.0) {
        const double cos_i = incidence_cosine(rotation, sun);
        const double direct = weather.dni * module_unshaded_fraction(g, project_sun(sun, rotation.axis));
        out.front += direct * std::max(0.0, cos_i);
        out.rear += direct * std::max(0.0, -cos_i);
    }
    return out;
}

}  // namespace detail

GroundProfile ground_profile(const ArrayLayout& layout, const RotationState& rotation,
                             const WeatherRecord& weather, const SunPosition& sun, int points) {
    if (points < 32) throw RangeError("ground_profile: at least 32 points per pitch are required");
    ArrayLayout l = layout;
    l.ground_points = points;
    GroundProfile p;
    p.points = ground_points(l);
    p.irradiance.assign(p.points.size(), 0.0);
    std::vector<double> scratch(p.points.size());
    detail::ground_irradiance(section_geometry(layout, rotation.rotation), rotation.axis, weather, sun, p.points,
                              p.irradiance, scratch);
    p.unshaded_ghi = detail::unshaded_ghi(weather, sun);
    return p;
}

double shading_ratio(const GroundProfile& profile) {
    if (!(profile.unshaded_ghi > 0.0))
        throw DomainError("shading_ratio: undefined without light on open ground");
    return profile.mean() / profile.unshaded_ghi;
}

PlaneOfArray poa_irradiance(const ArrayLayout& layout, const RotationState& rotation,
                            const WeatherRecord& weather, const SunPosition& sun, double albedo,
                            double mean_ground_irradiance) {
    const auto g = section_geometry(layout, rotation.rotation);
    return detail::poa(g, module_view_factors(g), rotation, weather, sun, albedo, mean_ground_irradiance);
}

PlaneOfArray poa_irradiance(const ArrayLayout& layout, const RotationState& rotation,
                            const WeatherRecord& weather, const SunPosition& sun, double albedo) {
    const auto profile = ground_profile(layout, rotation, weather, sun, layout.ground_points);
    return poa_irradiance(layout, rotation, weather, sun, albedo, profile.mean());
}

}  // namespace agripv
