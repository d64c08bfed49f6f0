#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "agripv/error.hpp"
#include "agripv/planner.hpp"

namespace agripv {

// ---------------------------------------------------------------------------
// Caches
// ---------------------------------------------------------------------------

DesignSpace::DesignSpace(std::shared_ptr<const WeatherSeries> weather, ArrayLayout layout)
    : weather_(std::move(weather)), layout_(std::move(layout)) {
    layout_.validate();
    timeline_ = build_timeline(*weather_);
}

DesignSpace::Slot& DesignSpace::slot(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto& s = runs_[key];
    if (!s) s = std::make_unique<Slot>();
    return *s;
}

namespace {

std::string run_key(const TrackingScheme& s) {
    return fmt::format("{}|{}|{}", to_string(s.mode), s.rotation_limit,
                       s.fixed_tilt ? fmt::format("{}", *s.fixed_tilt) : std::string{});
}

}  // namespace

const std::vector<TimestepYield>& DesignSpace::run(const TrackingScheme& scheme) {
    if (scheme.mode == TrackingMode::CT) throw DomainError("DesignSpace::run: CT is a blend, use series()");
    auto& s = slot(run_key(scheme));
    std::call_once(s.once, [&] { s.value = run_scheme(timeline_, *weather_, layout_, scheme); });
    return s.value;
}

const std::vector<TimestepYield>& DesignSpace::reference() {
    auto& s = slot("reference");
    std::call_once(s.once,
                   [&] { s.value = run_scheme(timeline_, *weather_, reference_layout(layout_), reference_scheme()); });
    return s.value;
}

YieldSeries DesignSpace::series(const TrackingScheme& scheme) {
    scheme.validate();
    std::vector<TimestepYield> av;
    if (scheme.mode == TrackingMode::CT) {
        const auto& st = run(TrackingScheme::standard(scheme.rotation_limit));
        const auto& at = run(TrackingScheme::anti(scheme.rotation_limit));
        av = blend(st, at, ct_weights(timeline_, scheme.st_hours));
    } else {
        av = run(scheme);
    }
    return assemble(timeline_, std::move(av), rear_weight_for(layout_, scheme.mode), reference());
}

Workspace::Workspace(Scenario scenario, WeatherLoader loader)
    : scenario_(std::move(scenario)), loader_(std::move(loader)) {}

std::shared_ptr<const WeatherSeries> Workspace::weather(std::string_view site) {
    const SiteVariant& variant = scenario_.site_variant(site);
    std::lock_guard lock(mutex_);
    if (auto it = weather_.find(site); it != weather_.end()) return it->second;
    auto w = std::make_shared<const WeatherSeries>(loader_(variant));
    weather_.emplace(std::string{site}, w);
    return w;
}

DesignSpace& Workspace::design(std::string_view site, double a_lm) {
    auto w = weather(site);
    std::lock_guard lock(mutex_);
    auto& d = designs_[{std::string{site}, a_lm}];
    if (!d) {
        const auto& base = scenario_.layout;
        ArrayLayout layout = ArrayLayout::from_a_lm(a_lm, base.module_width, base.hub_height);
        layout.bifacial_rear_weight = base.bifacial_rear_weight;
        layout.ground_points = base.ground_points;
        d = std::make_unique<DesignSpace>(std::move(w), layout);
    }
    return *d;
}

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

std::vector<double> HourGrid::values() const {
    if (!(step > 0.0) || !(last >= first) || first < 0.0 || last > 24.0)
        throw RangeError(fmt::format("hour grid [{}, {}] step {} is invalid", first, last, step));
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((last - first) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(first + static_cast<double>(i) * step);
    return out;
}

std::optional<double> FeasibilityReport::lower() const {
    if (window.empty()) return std::nullopt;
    return window.front();
}

std::optional<double> FeasibilityReport::upper() const {
    if (window.empty()) return std::nullopt;
    return window.back();
}

namespace {

FeasibilityPoint evaluate_point(const YieldSeries& s, double n, const ShadeResponse& crop, const Thresholds& th) {
    FeasibilityPoint p;
    p.n = n;
    for (int m = 0; m < 12; ++m) {
        p.y_pv[static_cast<std::size_t>(m)] = y_pv(s, MonthSet{m});
        p.y_crop[static_cast<std::size_t>(m)] = monthly_y_crop(crop, s, m);
    }
    p.y_pv_period = y_pv(s, th.period);
    p.y_crop_period = y_crop(crop, seasonal_par_fraction(s, th.period));
    if (th.enforcement == Enforcement::Seasonal) {
        p.energy_ok = p.y_pv_period >= th.theta_energy;
        p.crop_ok = p.y_crop_period >= th.theta_crop;
    } else {
        p.energy_ok = p.crop_ok = true;
        for (int m : th.period.months()) {
            p.energy_ok = p.energy_ok && p.y_pv[static_cast<std::size_t>(m)] >= th.theta_energy;
            p.crop_ok = p.crop_ok && p.y_crop[static_cast<std::size_t>(m)] >= th.theta_crop;
        }
    }
    return p;
}

}  // namespace

FeasibilityReport feasible_st_window(DesignSpace& design, const ShadeResponse& crop, const Thresholds& thresholds,
                                     const HourGrid& grid) {
    if (thresholds.period.empty()) throw DomainError("feasible_st_window: empty evaluation period");
    thresholds.validate();
    FeasibilityReport r;
    r.thresholds = thresholds;
    r.crop_class = crop.name();
    for (double n : grid.values()) {
        const auto s = design.series(TrackingScheme::customized(n));
        r.grid.push_back(evaluate_point(s, n, crop, thresholds));
        if (r.grid.back().feasible()) r.window.push_back(n);
    }
    return r;
}

FeasibilityReport feasible_st_window(Workspace& ws, const HourGrid& grid) {
    const auto& sc = ws.scenario();
    const auto curves = sc.curves();
    return feasible_st_window(ws.design(), curves.at(sc.crop_response), sc.thresholds, grid);
}

std::array<double, 12> max_st_hours_per_month(DesignSpace& design, const ShadeResponse& crop,
                                              const Thresholds& thresholds, double step) {
    thresholds.validate();
    std::array<double, 12> best{};
    Thresholds monthly = thresholds;
    monthly.enforcement = Enforcement::Monthly;
    for (double n : HourGrid{0.0, 24.0, step}.values()) {
        const auto s = design.series(TrackingScheme::customized(n));
        const auto p = evaluate_point(s, n, crop, monthly);
        for (std::size_t m = 0; m < 12; ++m)
            if (p.y_pv[m] >= thresholds.theta_energy && p.y_crop[m] >= thresholds.theta_crop) best[m] = n;
    }
    const auto& w = design.weather();
    const auto first = std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(w.records.front().time)};
    for (unsigned m = 0; m < 12; ++m) {
        const CivilDate mid{first.year() / std::chrono::month{m + 1} / std::chrono::day{15}};
        best[m] = std::min(best[m], daylight_hours(w.site, mid));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Economics over designs
// ---------------------------------------------------------------------------

CellOutcome evaluate_design(const YieldSeries& series, TrackingMode mode, double a_lm, const CropPlan& plan,
                            const ShadeCurveSet& curves, const EconParams& params) {
    CellOutcome o;
    o.y_pv = y_pv(series, MonthSet::all());
    o.crop = rotation_yield(plan, series, curves);
    EconInputs in;
    in.mode = mode;
    in.a_lm_av = a_lm;
    in.y_pv = o.y_pv;
    in.yy_ref = series.reference_annual_kwh() * params.module_efficiency;
    in.crop_profit_per_land = o.crop.revenue_realized / 1e4;  // $/ha -> $/m2
    o.econ = evaluate(params, in);
    return o;
}

std::size_t argmin_prefer_last(const std::vector<double>& values, double rel_tol) {
    if (values.empty()) throw DomainError("argmin over an empty set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double tol = rel_tol * std::max(std::abs(values[i]), std::abs(values[best]));
        if (values[i] <= values[best] + tol) best = i;
    }
    return best;
}

OptimizeResult optimize_ct(Workspace& ws, const HourGrid& grid) {
    const auto& sc = ws.scenario();
    OptimizeResult r;
    r.report = feasible_st_window(ws, grid);
    if (r.report.empty()) {
        const bool any_energy = std::any_of(r.report.grid.begin(), r.report.grid.end(),
                                            [](const auto& p) { return p.energy_ok; });
        const bool any_crop =
            std::any_of(r.report.grid.begin(), r.report.grid.end(), [](const auto& p) { return p.crop_ok; });
        if (!any_energy && !any_crop)
            r.binding = "energy and crop thresholds both unmet at every n";
        else if (!any_energy)
            r.binding = fmt::format("energy threshold {} unmet at every n", sc.thresholds.theta_energy);
        else if (!any_crop)
            r.binding = fmt::format("crop threshold {} unmet at every n", sc.thresholds.theta_crop);
        else
            r.binding = "energy and crop thresholds are met at disjoint n";
        return r;
    }
    const auto curves = sc.curves();
    const auto plan = sc.plan();
    auto& design = ws.design();
    std::vector<double> pprs;
    for (double n : r.report.window) {
        const auto s = design.series(TrackingScheme::customized(n));
        r.scan.emplace_back(n, evaluate_design(s, TrackingMode::CT, design.layout().a_lm(), plan, curves, sc.econ));
        pprs.push_back(r.scan.back().second.econ.ppr.value);
    }
    const auto best = argmin_prefer_last(pprs);
    r.feasible = true;
    r.n = r.scan[best].first;
    r.outcome = r.scan[best].second;
    return r;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

template <class T>
std::vector<T> or_base(const std::vector<T>& axis, T base) {
    return axis.empty() ? std::vector<T>{std::move(base)} : axis;
}

void run_parallel(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) job(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<SweepRow> run_sweep(Workspace& ws, const SweepOptions& options) {
    const auto& sc = ws.scenario();
    const auto& spec = sc.sweep;
    spec.validate();
    const auto sites = or_base(spec.site, std::string{"base"});
    const auto mls = or_base(spec.M_L, sc.econ.M_L);
    const auto alms = or_base(spec.a_lm, sc.layout.a_lm());
    const auto schemes = or_base(spec.scheme, sc.scheme);
    const auto plans = or_base(spec.crop_plan, sc.crop_plan);
    const auto fits = or_base(spec.delta_fit, sc.econ.delta_fit_pct);

    // Simulate every (site, a_lm, scheme) design once; errors surface per cell.
    struct Design {
        std::optional<YieldSeries> series;
        std::string error;
    };
    const std::size_t nd = sites.size() * alms.size() * schemes.size();
    std::vector<Design> designs(nd);
    auto design_index = [&](std::size_t si, std::size_t ai, std::size_t ki) {
        return (si * alms.size() + ai) * schemes.size() + ki;
    };
    run_parallel(nd, options.threads, [&](std::size_t i) {
        const std::size_t ki = i % schemes.size();
        const std::size_t ai = (i / schemes.size()) % alms.size();
        const std::size_t si = i / (schemes.size() * alms.size());
        try {
            designs[i].series = ws.design(sites[si], alms[ai]).series(schemes[ki]);
        } catch (const std::exception& e) {
            designs[i].error = e.what();
        }
    });

    std::optional<ShadeCurveSet> curves;
    std::string curves_error;
    try {
        curves = sc.curves();
    } catch (const std::exception& e) {
        curves_error = e.what();
    }

    std::vector<SweepRow> rows;
    rows.reserve(spec.cell_count());
    for (std::size_t si = 0; si < sites.size(); ++si)
        for (double ml : mls)
            for (std::size_t ai = 0; ai < alms.size(); ++ai)
                for (std::size_t ki = 0; ki < schemes.size(); ++ki)
                    for (const auto& plan_name : plans)
                        for (double fit : fits) {
                            SweepRow row{sites[si], ml, alms[ai], scheme_label(schemes[ki]), plan_name, fit, {}, {}};
                            const auto& d = designs[design_index(si, ai, ki)];
                            try {
                                if (!d.series) throw DomainError(d.error);
                                if (!curves) throw SchemaError(curves_error);
                                EconParams params = sc.econ;
                                params.M_L = ml;
                                params.delta_fit_pct = fit;
                                params.validate();
                                row.outcome = evaluate_design(*d.series, schemes[ki].mode, alms[ai],
                                                              sc.plan(plan_name), *curves, params);
                            } catch (const std::exception& e) {
                                row.error = e.what();
                            }
                            rows.push_back(std::move(row));
                        }
    return rows;
}

SweepSpec table2_spec() {
    SweepSpec s;
    s.M_L = {10, 15, 20, 25, 30};
    s.a_lm = {2, 4, 6};
    s.scheme = {TrackingScheme::ns_fixed(), TrackingScheme::standard(), TrackingScheme::anti()};
    s.crop_plan = {"LV", "HV"};
    return s;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + '"';
}

std::string fixed(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.{}f}", v, digits);
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "site,scheme,a_lm,M_L,crop_plan,delta_fit_pct,y_pv,y_crop,p_prime,pb_prime,ppr,delta_fit_th_pct,error\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},", csv_field(r.site), r.scheme, r.a_lm, r.M_L, csv_field(r.crop_plan),
                           r.delta_fit);
        if (r.outcome) {
            const auto& o = *r.outcome;
            out += fmt::format("{},{},{},{},{},{},\n", fixed(o.y_pv, 6), fixed(o.crop.mean_y_crop(), 6),
                               fixed(o.econ.p_prime, 6), fixed(o.econ.pb_prime, 6), fixed(o.econ.ppr.value, 6),
                               fixed(o.econ.delta_fit_th, 4));
        } else {
            out += fmt::format(",,,,,,{}\n", csv_field(r.error));
        }
    }
    return out;
}

std::string table2_wide_csv(const std::vector<SweepRow>& rows) {
    static constexpr std::array<std::pair<const char*, const char*>, 6> columns{{
        {"NS_FIXED", "LV"}, {"ST", "LV"}, {"AT", "LV"}, {"NS_FIXED", "HV"}, {"ST", "HV"}, {"AT", "HV"}}};
    std::map<std::pair<double, double>, std::array<std::string, 6>> table;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (r.scheme != columns[c].first || r.crop_plan != columns[c].second) continue;
            auto& line = table[{r.M_L, r.a_lm}];
            line[c] = r.outcome ? fixed(r.outcome->econ.delta_fit_th, 2) : "NA";
        }
    }
    std::string out = "M_L,A_LM,NS_LV,ST_LV,AT_LV,NS_HV,ST_HV,AT_HV\n";
    for (const auto& [key, line] : table) {
        out += fmt::format("{},{}", key.first, key.second);
        for (const auto& v : line) out += ',' + (v.empty() ? std::string{"NA"} : v);
        out += '\n';
    }
    return out;
}

}  // namespace agripv
