#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "agripv/error.hpp"
#include "agripv/optics.hpp"

namespace agripv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Interval {
    double a, b;
};

// Blocked angular ranges seen from a point on the chord, in the domain
// [-pi/2, 3pi/2): east-side rows near 0, west-side rows near pi.
std::vector<Interval> blocked_from(const SectionGeometry& g, double px, double pz, int rows) {
    std::vector<Interval> out;
    out.reserve(2 * static_cast<std::size_t>(rows));
    for (int k = 1; k <= rows; ++k) {
        for (int side : {1, -1}) {
            const double off = side * k * g.pitch;
            double a1 = std::atan2(g.z1 - pz, g.x1 + off - px);
            double a2 = std::atan2(g.z2 - pz, g.x2 + off - px);
            if (a1 < -kPi / 2.0) a1 += 2.0 * kPi;
            if (a2 < -kPi / 2.0) a2 += 2.0 * kPi;
            out.push_back({std::min(a1, a2), std::max(a1, a2)});
        }
    }
    return out;
}

std::vector<Interval> free_complement(std::vector<Interval> blocked) {
    std::sort(blocked.begin(), blocked.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
    std::vector<Interval> free;
    double cursor = -kPi / 2.0;
    for (const auto& iv : blocked) {
        if (iv.a > cursor) free.push_back({cursor, iv.a});
        cursor = std::max(cursor, iv.b);
    }
    if (cursor < 1.5 * kPi) free.push_back({cursor, 1.5 * kPi});
    return free;
}

// Cosine-weighted 2-D view factor of the free directions within [lo, hi]
// for a face with normal angle phi_n: integral of cos(phi - phi_n)/2.
double weight(const std::vector<Interval>& free, double lo, double hi, double phi_n) {
    double sum = 0.0;
    for (const auto& iv : free) {
        const double a = std::max(lo, iv.a);
        const double b = std::min(hi, iv.b);
        if (b > a) sum += 0.5 * (std::sin(b - phi_n) - std::sin(a - phi_n));
    }
    return sum;
}

void face_factors(const std::vector<Interval>& free, double phi_n, double& sky, double& ground) {
    static constexpr Interval kSky[] = {{0.0, kPi}};
    static constexpr Interval kGround[] = {{-kPi / 2.0, 0.0}, {kPi, 1.5 * kPi}};
    for (double shift : {-2.0 * kPi, 0.0, 2.0 * kPi}) {
        const double h0 = phi_n - kPi / 2.0 + shift;
        const double h1 = phi_n + kPi / 2.0 + shift;
        for (const auto& r : kSky) {
            const double lo = std::max(h0, r.a), hi = std::min(h1, r.b);
            if (hi > lo) sky += weight(free, lo, hi, phi_n + shift);
        }
        for (const auto& r : kGround) {
            const double lo = std::max(h0, r.a), hi = std::min(h1, r.b);
            if (hi > lo) ground += weight(free, lo, hi, phi_n + shift);
        }
    }
}

}  // namespace

double density_a_lm(Density d) {
    switch (d) {
    case Density::FD: return 2.0;
    case Density::HD: return 4.0;
    case Density::TD: return 6.0;
    }
    return 2.0;
}

ArrayLayout ArrayLayout::from_a_lm(double a_lm, double module_width, double hub_height) {
    ArrayLayout l;
    l.module_width = module_width;
    l.pitch = a_lm * module_width;
    l.hub_height = hub_height;
    return l;
}

void ArrayLayout::validate() const {
    if (!(module_width > 0.0) || !std::isfinite(module_width))
        throw RangeError(fmt::format("layout.module_width must be > 0: {}", module_width));
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw RangeError(fmt::format("layout.pitch must be > 0: {}", pitch));
    if (pitch < module_width * (1.0 - 1e-12))
        throw RangeError(fmt::format("layout.a_lm must be >= 1: pitch {} < module width {}", pitch, module_width));
    if (!(hub_height >= 0.0) || !std::isfinite(hub_height))
        throw RangeError(fmt::format("layout.hub_height must be >= 0: {}", hub_height));
    if (bifacial_rear_weight && !(*bifacial_rear_weight >= 0.0 && *bifacial_rear_weight <= 1.0))
        throw RangeError(fmt::format("layout.bifacial_rear_weight must be in [0,1]: {}", *bifacial_rear_weight));
    if (ground_points < 32)
        throw RangeError(fmt::format("layout.ground_points must be >= 32: {}", ground_points));
}

double max_rotation(const TrackingScheme& scheme, const SiteConfig& site) {
    if (is_tracked(scheme.mode)) return scheme.rotation_limit;
    return std::abs(fixed_rotation(scheme, site).rotation);
}

void check_clearance(const ArrayLayout& layout, const TrackingScheme& scheme, const SiteConfig& site) {
    const double rot = max_rotation(scheme, site);
    const double bottom = layout.hub_height - 0.5 * layout.module_width * std::sin(rot * kDeg);
    if (!(bottom > 0.0))
        throw RangeError(fmt::format(
            "layout.hub_height {} m: module edge reaches the ground at rotation {} deg", layout.hub_height, rot));
}

double rear_weight_for(const ArrayLayout& layout, TrackingMode mode) {
    if (layout.bifacial_rear_weight) return *layout.bifacial_rear_weight;
    return mode == TrackingMode::EwVertical ? 1.0 : 0.0;
}

SectionGeometry section_geometry(const ArrayLayout& layout, double rotation_deg) {
    const double r = rotation_deg * kDeg;
    SectionGeometry g;
    g.pitch = layout.pitch;
    g.width = layout.module_width;
    g.nx = -std::sin(r);
    g.nz = std::cos(r);
    g.tx = std::cos(r);
    g.tz = std::sin(r);
    const double half = 0.5 * layout.module_width;
    g.x1 = -half * g.tx;
    g.z1 = layout.hub_height - half * g.tz;
    g.x2 = half * g.tx;
    g.z2 = layout.hub_height + half * g.tz;
    if (!(g.zmin() > 0.0))
        throw DomainError(fmt::format("module edge at or below ground (rotation {} deg, height {} m)",
                                      rotation_deg, layout.hub_height));
    return g;
}

int ground_rows_each_side(const SectionGeometry& g) {
    return std::max(8, static_cast<int>(std::ceil(60.0 * g.zmax() / g.pitch)));
}

std::vector<double> ground_points(const ArrayLayout& layout) {
    const int k = layout.ground_points;
    std::vector<double> xs(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) xs[static_cast<std::size_t>(i)] = (i + 0.5) * layout.pitch / k - 0.5 * layout.pitch;
    return xs;
}

FaceViewFactors module_view_factors(const SectionGeometry& g, int chord_samples) {
    // The point lies between the neighbours' endpoint heights, so images of
    // rows further out nest inside nearer ones; two rows per side suffice.
    constexpr int kRows = 2;
    const double phi_front = std::atan2(g.nz, g.nx);
    FaceViewFactors vf;
    for (int j = 0; j < chord_samples; ++j) {
        const double u = ((j + 0.5) / chord_samples - 0.5) * g.width;
        const double px = u * g.tx;
        const double pz = 0.5 * (g.z1 + g.z2) + u * g.tz;
        const auto free = free_complement(blocked_from(g, px, pz, kRows));
        face_factors(free, phi_front, vf.front_sky, vf.front_ground);
        face_factors(free, phi_front + kPi, vf.rear_sky, vf.rear_ground);
    }
    const double inv = 1.0 / chord_samples;
    vf.front_sky *= inv;
    vf.front_ground *= inv;
    vf.rear_sky *= inv;
    vf.rear_ground *= inv;
    return vf;
}

double module_unshaded_fraction(const SectionGeometry& g, const SectionBeam& beam) {
    const double sn = beam.x * g.nx + beam.z * g.nz;
    if (sn == 0.0 || beam.z <= 0.0) return 1.0;
    const double st = beam.x * g.tx + beam.z * g.tz;
    // Chord offset between the module and the shadow of the adjacent row.
    const double e = g.pitch * (g.nx * st - g.tx * sn) / sn;
    return std::min(1.0, std::abs(e) / g.width);
}

GroundShadow ground_shadow(const SectionGeometry& g, const SectionBeam& beam) {
    if (beam.z <= 0.0) return {0.0, g.pitch};
    const double slope = beam.x / beam.z;
    const double e1 = g.x1 - g.z1 * slope;
    const double e2 = g.x2 - g.z2 * slope;
    return {std::min(e1, e2), std::abs(e2 - e1)};
}

BeamBudget beam_budget(const ArrayLayout& layout, const RotationState& rotation, const SunPosition& sun,
                       double dni) {
    BeamBudget b;
    if (!sun.is_up || dni <= 0.0) return b;
    const auto g = section_geometry(layout, rotation.rotation);
    const auto beam = project_sun(sun, rotation.axis);
    const auto shadow = ground_shadow(g, beam);
    const double lit = g.pitch - std::min(shadow.length, g.pitch);
    const double sn = std::abs(beam.x * g.nx + beam.z * g.nz);
    b.incident = dni * beam.z * g.pitch;
    b.ground = dni * beam.z * lit;
    b.module_intercepted = dni * sn * g.width * module_unshaded_fraction(g, beam);
    return b;
}

}  // namespace agripv
