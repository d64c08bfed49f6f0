#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "agripv/error.hpp"
#include "agripv/optics.hpp"
#include "optics_internal.hpp"

namespace agripv {

SolarTimeline build_timeline(const WeatherSeries& weather) {
    SolarTimeline tl;
    tl.site = weather.site;
    const std::size_t n = weather.records.size();
    tl.sun.reserve(n);
    tl.solar_start.reserve(n);
    tl.month.reserve(n);
    tl.times.reserve(n);
    for (const auto& r : weather.records) {
        tl.sun.push_back(sun_position(weather.site, r.time + std::chrono::minutes{30}));
        tl.solar_start.push_back(solar_time_hours(weather.site, r.time));
        tl.month.push_back(month_index(r.time));
        tl.times.push_back(r.time);
    }
    return tl;
}

namespace {

RotationState attitude(const TrackingScheme& scheme, const SiteConfig& site, const SunPosition& sun) {
    switch (scheme.mode) {
    case TrackingMode::ST:
        return sun.is_up ? st_rotation(sun, scheme.rotation_limit) : RotationState{0.0, RowAxis::NorthSouth, true};
    case TrackingMode::AT:
        return sun.is_up ? at_rotation(sun, scheme.rotation_limit) : RotationState{0.0, RowAxis::NorthSouth, true};
    case TrackingMode::CT: break;
    default: return fixed_rotation(scheme, site);
    }
    throw DomainError("run_scheme: CT is evaluated by blending ST and AT runs");
}

}  // namespace

std::vector<TimestepYield> run_scheme(const SolarTimeline& timeline, const WeatherSeries& weather,
                                      const ArrayLayout& layout, const TrackingScheme& scheme,
                                      std::vector<std::vector<double>>* profiles) {
    if (timeline.sun.size() != weather.records.size())
        throw DomainError("run_scheme: timeline does not match the weather series");
    check_clearance(layout, scheme, weather.site);
    const auto xs = ground_points(layout);
    std::vector<double> ground(xs.size()), scratch(xs.size());
    std::vector<TimestepYield> out(weather.records.size());
    if (profiles) profiles->assign(weather.records.size(), {});

    // Fixed attitudes share one geometry; tracked ones are rebuilt per step.
    double cached_rotation = std::nan("");
    SectionGeometry g;
    FaceViewFactors vf;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& rec = weather.records[i];
        const auto& sun = timeline.sun[i];
        const RotationState rot = attitude(scheme, weather.site, sun);
        if (!(rot.rotation == cached_rotation)) {
            g = section_geometry(layout, rot.rotation);
            vf = module_view_factors(g);
            cached_rotation = rot.rotation;
        }
        TimestepYield& y = out[i];
        y.rotation = rot.rotation;
        y.unshaded = detail::unshaded_ghi(rec, sun);
        if (y.unshaded > 0.0) {
            detail::ground_irradiance(g, rot.axis, rec, sun, xs, ground, scratch);
            double sum = 0.0;
            for (double v : ground) sum += v;
            y.ground = sum / static_cast<double>(ground.size());
            if (profiles) (*profiles)[i] = ground;
        } else if (profiles) {
            (*profiles)[i].assign(xs.size(), 0.0);
        }
        const auto p = detail::poa(g, vf, rot, rec, sun, weather.site.albedo, y.ground);
        y.front = p.front;
        y.rear = p.rear;
    }
    return out;
}

std::vector<double> ct_weights(const SolarTimeline& timeline, double st_hours) {
    std::vector<double> w(timeline.solar_start.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = st_window_overlap(st_hours, timeline.solar_start[i], 1.0);
    return w;
}

std::vector<TimestepYield> blend(const std::vector<TimestepYield>& st, const std::vector<TimestepYield>& at,
                                 const std::vector<double>& weights) {
    if (st.size() != at.size() || st.size() != weights.size())
        throw DomainError("blend: series lengths differ");
    std::vector<TimestepYield> out(st.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double w = weights[i];
        const double v = 1.0 - w;
        out[i].front = w * st[i].front + v * at[i].front;
        out[i].rear = w * st[i].rear + v * at[i].rear;
        out[i].ground = w * st[i].ground + v * at[i].ground;
        out[i].unshaded = st[i].unshaded;
        out[i].rotation = w >= 0.5 ? st[i].rotation : at[i].rotation;
    }
    return out;
}

void YieldSeries::aggregate() {
    monthly = {};
    for (std::size_t i = 0; i < av.size(); ++i) {
        auto& m = monthly[static_cast<std::size_t>(month[i])];
        ++m.steps;
        m.av_energy += av_energy(i);
        m.reference_energy += reference_energy(i);
        m.ground_sum += av[i].ground;
        m.unshaded_sum += av[i].unshaded;
        if (av[i].unshaded > 0.0) {
            ++m.daylight_steps;
            m.shading_ratio_mean += av[i].ground / av[i].unshaded;
        }
    }
    for (auto& m : monthly)
        if (m.daylight_steps > 0) m.shading_ratio_mean /= m.daylight_steps;
}

double YieldSeries::reference_annual_kwh() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) sum += reference_energy(i);
    return sum / 1000.0;
}

ArrayLayout reference_layout(const ArrayLayout& layout) {
    ArrayLayout ref = ArrayLayout::from_a_lm(2.0, layout.module_width, layout.hub_height);
    ref.bifacial_rear_weight = 0.0;
    ref.ground_points = layout.ground_points;
    return ref;
}

TrackingScheme reference_scheme() { return TrackingScheme::ns_fixed(); }

YieldSeries assemble(const SolarTimeline& timeline, std::vector<TimestepYield> av, double av_rear_weight,
                     std::vector<TimestepYield> reference, std::vector<std::vector<double>> profiles) {
    YieldSeries s;
    s.times = timeline.times;
    s.month = timeline.month;
    s.av = std::move(av);
    s.reference = std::move(reference);
    s.profiles = std::move(profiles);
    s.av_rear_weight = av_rear_weight;
    s.reference_rear_weight = 0.0;
    s.aggregate();
    return s;
}

YieldSeries simulate_year(const WeatherSeries& weather, const SimulationRequest& request) {
    weather.site.validate();
    request.layout.validate();
    request.scheme.validate();
    const auto tl = build_timeline(weather);
    const auto ref_layout = reference_layout(request.layout);
    auto reference = run_scheme(tl, weather, ref_layout, reference_scheme());

    std::vector<std::vector<double>> profiles;
    std::vector<TimestepYield> av;
    if (request.scheme.mode == TrackingMode::CT) {
        auto st_scheme = TrackingScheme::standard(request.scheme.rotation_limit);
        auto at_scheme = TrackingScheme::anti(request.scheme.rotation_limit);
        std::vector<std::vector<double>> pst, pat;
        const auto st = run_scheme(tl, weather, request.layout, st_scheme, request.keep_profiles ? &pst : nullptr);
        const auto at = run_scheme(tl, weather, request.layout, at_scheme, request.keep_profiles ? &pat : nullptr);
        const auto w = ct_weights(tl, request.scheme.st_hours);
        av = blend(st, at, w);
        if (request.keep_profiles) {
            profiles.resize(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) {
                profiles[i].resize(pst[i].size());
                for (std::size_t k = 0; k < pst[i].size(); ++k)
                    profiles[i][k] = w[i] * pst[i][k] + (1.0 - w[i]) * pat[i][k];
            }
        }
    } else {
        av = run_scheme(tl, weather, request.layout, request.scheme,
                        request.keep_profiles ? &profiles : nullptr);
    }
    return assemble(tl, std::move(av), rear_weight_for(request.layout, request.scheme.mode),
                    std::move(reference), std::move(profiles));
}

double y_pv(const YieldSeries& series, const MonthSet& period) {
    if (period.empty()) throw DomainError("y_pv: empty period");
    double av = 0.0, ref = 0.0;
    for (int m : period.months()) {
        av += series.monthly[static_cast<std::size_t>(m)].av_energy;
        ref += series.monthly[static_cast<std::size_t>(m)].reference_energy;
    }
    if (!(ref > 0.0)) throw DomainError(fmt::format("y_pv: no reference energy in {}", period.to_string()));
    return av / ref;
}

}  // namespace agripv
