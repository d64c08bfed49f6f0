#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agripv/agronomy.hpp"
#include "agripv/economics.hpp"
#include "agripv/optics.hpp"
#include "agripv/scenario.hpp"

namespace agripv {

/// Cached per-timestep runs for one weather series and one layout. CT(n)
/// for any n is a blend of the cached ST and AT runs, so a whole n-grid
/// costs two simulations plus the shared reference. Thread-safe.
class DesignSpace {
public:
    DesignSpace(std::shared_ptr<const WeatherSeries> weather, ArrayLayout layout);

    const WeatherSeries& weather() const { return *weather_; }
    const ArrayLayout& layout() const { return layout_; }
    const SolarTimeline& timeline() const { return timeline_; }

    /// Per-timestep run of a non-CT scheme; computed once, then shared.
    const std::vector<TimestepYield>& run(const TrackingScheme& scheme);
    const std::vector<TimestepYield>& reference();

    /// Same result as simulate_year(weather, {layout, scheme}).
    YieldSeries series(const TrackingScheme& scheme);

private:
    struct Slot {
        std::once_flag once;
        std::vector<TimestepYield> value;
    };
    Slot& slot(const std::string& key);

    std::shared_ptr<const WeatherSeries> weather_;
    ArrayLayout layout_;
    SolarTimeline timeline_;
    std::mutex mutex_;
    std::map<std::string, std::unique_ptr<Slot>> runs_;
};

/// Owns the scenario plus lazily loaded weather and design spaces keyed by
/// (site, a_lm). Thread-safe.
class Workspace {
public:
    using WeatherLoader = std::function<WeatherSeries(const SiteVariant&)>;

    explicit Workspace(Scenario scenario, WeatherLoader loader = load_site_weather);

    const Scenario& scenario() const { return scenario_; }
    std::shared_ptr<const WeatherSeries> weather(std::string_view site);
    /// The scenario layout with its pitch rescaled to a_lm.
    DesignSpace& design(std::string_view site, double a_lm);
    DesignSpace& design() { return design("base", scenario_.layout.a_lm()); }

private:
    Scenario scenario_;
    WeatherLoader loader_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const WeatherSeries>, std::less<>> weather_;
    std::map<std::pair<std::string, double>, std::unique_ptr<DesignSpace>> designs_;
};

/// Grid of CT hours: first, first + step, ..., last.
struct HourGrid {
    double first = 0.0;
    double last = 14.0;
    double step = 0.5;

    std::vector<double> values() const;
};

struct FeasibilityPoint {
    double n = 0.0;
    std::array<double, 12> y_pv{};    // per month
    std::array<double, 12> y_crop{};  // per month
    double y_pv_period = 0.0;         // aggregate over the period
    double y_crop_period = 0.0;
    bool energy_ok = false;
    bool crop_ok = false;
    bool feasible() const { return energy_ok && crop_ok; }
};

struct FeasibilityReport {
    Thresholds thresholds;
    std::string crop_class;
    std::vector<FeasibilityPoint> grid;
    std::vector<double> window;  // n values where both thresholds hold

    bool empty() const { return window.empty(); }
    std::optional<double> lower() const;
    std::optional<double> upper() const;
};

/// Evaluates every n of the grid against the thresholds over the period.
/// Monthly enforcement requires each month of the period to pass; seasonal
/// enforcement uses period aggregates. Throws DomainError for an empty period.
FeasibilityReport feasible_st_window(DesignSpace& design, const ShadeResponse& crop, const Thresholds& thresholds,
                                     const HourGrid& grid = {});
FeasibilityReport feasible_st_window(Workspace& ws, const HourGrid& grid = {});

/// Per month, the largest n on a 0..24 h grid meeting both monthly
/// thresholds, capped at the mid-month day length. 0 when none passes.
std::array<double, 12> max_st_hours_per_month(DesignSpace& design, const ShadeResponse& crop,
                                              const Thresholds& thresholds, double step = 0.5);

/// Economic evaluation of one simulated design. Y_PV is annual; crop profit
/// comes from the plan's realized revenue.
struct CellOutcome {
    double y_pv = 0.0;
    CropYieldResult crop;
    EconResult econ;
};
CellOutcome evaluate_design(const YieldSeries& series, TrackingMode mode, double a_lm, const CropPlan& plan,
                            const ShadeCurveSet& curves, const EconParams& params);

struct OptimizeResult {
    bool feasible = false;
    std::string binding;  // constraint that empties the window; empty when feasible
    double n = 0.0;
    CellOutcome outcome;
    FeasibilityReport report;
    std::vector<std::pair<double, CellOutcome>> scan;  // every n of the window
};

/// Scans the feasible window and returns the n with the smallest ppr; ties
/// go to the larger n.
OptimizeResult optimize_ct(Workspace& ws, const HourGrid& grid = {});

/// Index of the smallest value; ties (within rel_tol) go to the later entry.
std::size_t argmin_prefer_last(const std::vector<double>& values, double rel_tol = 1e-12);

struct SweepRow {
    std::string site;
    double M_L = 0.0;
    double a_lm = 0.0;
    std::string scheme;
    std::string crop_plan;
    double delta_fit = 0.0;
    std::optional<CellOutcome> outcome;
    std::string error;
};

struct SweepOptions {
    unsigned threads = 1;
};

/// One row per cell of the scenario's [sweep] axes, ordered by axis index
/// (site, M_L, a_lm, scheme, crop_plan, delta_fit). Empty axes take the base
/// value. Simulations run in parallel; the rows do not depend on threads.
std::vector<SweepRow> run_sweep(Workspace& ws, const SweepOptions& options = {});

/// The M_L x A_LM x {NS_FIXED, ST, AT} x {LV, HV} grid of the policy table.
SweepSpec table2_spec();

std::string sweep_csv(const std::vector<SweepRow>& rows);
/// Wide layout: one line per (M_L, A_LM) with ΔFIT_TH per scheme and plan.
std::string table2_wide_csv(const std::vector<SweepRow>& rows);

}  // namespace agripv
