#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "agripv/crops.hpp"
#include "agripv/optics.hpp"

namespace agripv {

struct ControlPoint {
    double par = 1.0;
    double yield = 1.0;
};

/// Relative yield as a quadratic in PAR reduction r = 1 - par:
/// f = 1 + a r + b r^2, so f(1) = 1 by construction.
class ShadeResponse {
public:
    ShadeResponse() = default;

    /// Least-squares fit through the control points (at least two distinct
    /// par values below 1). Classes "S" and "T" must come out
    /// non-decreasing on [0,1]; throws ValidationError otherwise.
    static ShadeResponse fit(std::string name, std::vector<ControlPoint> points);
    static ShadeResponse from_coefficients(std::string name, double a, double b);

    const std::string& name() const { return name_; }
    double a() const { return a_; }
    double b() const { return b_; }
    const std::vector<ControlPoint>& points() const { return points_; }

    /// f(par), clamped below at 0. par outside [0,1] throws RangeError.
    double operator()(double par) const;
    bool non_decreasing() const;

private:
    std::string name_;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<ControlPoint> points_;
};

class ShadeCurveSet {
public:
    /// The shipped S/T/L calibration (same data as data/crop_curves.csv).
    static ShadeCurveSet defaults();
    /// CSV with header `class,par,yield`, one control point per line.
    static ShadeCurveSet parse_csv(std::string_view text);
    static ShadeCurveSet load(const std::filesystem::path& path);

    void add(ShadeResponse response);
    bool contains(std::string_view key) const;
    /// Throws SchemaError for an unknown key.
    const ShadeResponse& at(std::string_view key) const;
    std::vector<std::string> keys() const;

private:
    std::map<std::string, ShadeResponse, std::less<>> curves_;
};

/// Irradiance-weighted ground light fraction over the daylight steps of the
/// months. Throws DomainError if the months hold no daylight.
double seasonal_par_fraction(const YieldSeries& series, const MonthSet& months);

double y_crop(const ShadeResponse& response, double par);

double monthly_y_crop(const ShadeResponse& response, const YieldSeries& series, int month);

struct CropOutcome {
    std::string crop_name;
    MonthSet months;
    bool fallow = false;
    double par_fraction = 1.0;
    double y_crop = 1.0;
    double revenue_full_sun = 0.0;  // $/ha
    double revenue_realized = 0.0;  // $/ha
};

struct CropYieldResult {
    std::vector<CropOutcome> entries;
    double revenue_full_sun = 0.0;
    double revenue_realized = 0.0;

    /// Revenue-weighted Y_Crop over non-fallow entries (1 if none).
    double mean_y_crop() const;
};

CropYieldResult rotation_yield(const CropPlan& plan, const YieldSeries& series, const ShadeCurveSet& curves);

/// As rotation_yield with a uniform Y_Crop in place of the simulated PAR.
CropYieldResult rotation_yield_uniform(const CropPlan& plan, double y);

}  // namespace agripv
