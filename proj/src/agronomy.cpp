#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "agripv/agronomy.hpp"
#include "agripv/error.hpp"

namespace agripv {

namespace {

constexpr double kParSlack = 1e-9;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, int line) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ParseError(fmt::format("crop curves line {}: not a number: '{}'", line, s));
    return v;
}

}  // namespace

ShadeResponse ShadeResponse::fit(std::string name, std::vector<ControlPoint> points) {
    // Normal equations for y - 1 = a r + b r^2.
    double s2 = 0, s3 = 0, s4 = 0, t1 = 0, t2 = 0;
    for (const auto& p : points) {
        if (!(p.par >= 0.0 && p.par <= 1.0) || !(p.yield >= 0.0))
            throw ValidationError(fmt::format("shade curve {}: control point ({}, {}) out of range", name, p.par, p.yield));
        const double r = 1.0 - p.par;
        const double d = p.yield - 1.0;
        s2 += r * r;
        s3 += r * r * r;
        s4 += r * r * r * r;
        t1 += r * d;
        t2 += r * r * d;
    }
    const double det = s2 * s4 - s3 * s3;
    if (!(std::abs(det) > 1e-12))
        throw ValidationError(fmt::format("shade curve {}: needs two distinct control points with par < 1", name));
    ShadeResponse out = from_coefficients(std::move(name), (t1 * s4 - t2 * s3) / det, (s2 * t2 - s3 * t1) / det);
    out.points_ = std::move(points);
    if ((out.name_ == "S" || out.name_ == "T") && !out.non_decreasing())
        throw ValidationError(fmt::format("shade curve {}: fitted curve decreases with PAR", out.name_));
    return out;
}

ShadeResponse ShadeResponse::from_coefficients(std::string name, double a, double b) {
    ShadeResponse out;
    out.name_ = std::move(name);
    out.a_ = a;
    out.b_ = b;
    return out;
}

double ShadeResponse::operator()(double par) const {
    if (!(par >= -kParSlack && par <= 1.0 + kParSlack))
        throw RangeError(fmt::format("y_crop: PAR fraction {} outside [0,1]", par));
    const double r = 1.0 - std::clamp(par, 0.0, 1.0);
    return std::max(0.0, 1.0 + a_ * r + b_ * r * r);
}

bool ShadeResponse::non_decreasing() const {
    // df/dpar = -(a + 2 b r), linear in r: check both ends of [0,1].
    return a_ <= 0.0 && a_ + 2.0 * b_ <= 0.0;
}

ShadeCurveSet ShadeCurveSet::defaults() {
    ShadeCurveSet set;
    set.add(ShadeResponse::fit("S", {{1.0, 1.00}, {0.9, 0.88}, {0.8, 0.77}, {0.7, 0.66},
                                     {0.6, 0.56}, {0.5, 0.46}, {0.4, 0.37}, {0.3, 0.28}}));
    set.add(ShadeResponse::fit("T", {{1.0, 1.00}, {0.9, 0.95}, {0.8, 0.89}, {0.7, 0.82},
                                     {0.6, 0.75}, {0.5, 0.67}, {0.4, 0.58}, {0.3, 0.48}}));
    set.add(ShadeResponse::fit("L", {{1.0, 1.00}, {0.9, 1.02}, {0.8, 1.02}, {0.7, 1.00},
                                     {0.6, 0.96}, {0.5, 0.91}, {0.4, 0.85}, {0.3, 0.77}}));
    return set;
}

ShadeCurveSet ShadeCurveSet::parse_csv(std::string_view text) {
    std::map<std::string, std::vector<ControlPoint>, std::less<>> points;
    std::vector<std::string> order;
    int line_no = 0;
    bool header = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "class,par,yield")
                throw ParseError(fmt::format("crop curves line {}: expected header 'class,par,yield'", line_no));
            header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
            throw ParseError(fmt::format("crop curves line {}: expected 3 fields", line_no));
        const std::string key{trim(line.substr(0, c1))};
        if (key.empty()) throw ParseError(fmt::format("crop curves line {}: empty class", line_no));
        const ControlPoint p{parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_no),
                             parse_number(line.substr(c2 + 1), line_no)};
        auto [it, inserted] = points.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(p);
    }
    if (!header) throw ParseError("crop curves: empty file");
    ShadeCurveSet set;
    for (const auto& key : order) set.add(ShadeResponse::fit(key, points.find(key)->second));
    return set;
}

ShadeCurveSet ShadeCurveSet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot open crop curve file {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

void ShadeCurveSet::add(ShadeResponse response) {
    const std::string key = response.name();
    curves_.insert_or_assign(key, std::move(response));
}

bool ShadeCurveSet::contains(std::string_view key) const { return curves_.find(key) != curves_.end(); }

const ShadeResponse& ShadeCurveSet::at(std::string_view key) const {
    const auto it = curves_.find(key);
    if (it == curves_.end()) throw SchemaError(fmt::format("unknown shade response class '{}'", key));
    return it->second;
}

std::vector<std::string> ShadeCurveSet::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : curves_) out.push_back(k);
    return out;
}

double seasonal_par_fraction(const YieldSeries& series, const MonthSet& months) {
    if (months.empty()) throw DomainError("seasonal_par_fraction: empty month set");
    double ground = 0.0, open = 0.0;
    for (int m : months.months()) {
        ground += series.monthly[static_cast<std::size_t>(m)].ground_sum;
        open += series.monthly[static_cast<std::size_t>(m)].unshaded_sum;
    }
    if (!(open > 0.0))
        throw DomainError(fmt::format("seasonal_par_fraction: no daylight in {}", months.to_string()));
    return ground / open;
}

double y_crop(const ShadeResponse& response, double par) { return response(par); }

double monthly_y_crop(const ShadeResponse& response, const YieldSeries& series, int month) {
    if (month < 0 || month > 11) throw RangeError(fmt::format("month index {} outside 0..11", month));
    MonthSet one;
    one.insert(month);
    return response(seasonal_par_fraction(series, one));
}

double CropYieldResult::mean_y_crop() const {
    double full = 0.0, realized = 0.0;
    for (const auto& e : entries) {
        if (e.fallow) continue;
        full += e.revenue_full_sun;
        realized += e.revenue_realized;
    }
    return full > 0.0 ? realized / full : 1.0;
}

namespace {

template <class YieldOf>
CropYieldResult collect(const CropPlan& plan, YieldOf&& yield_of) {
    CropYieldResult out;
    for (const auto& entry : plan.entries) {
        CropOutcome o;
        o.crop_name = entry.crop_name;
        o.months = entry.months;
        o.fallow = entry.fallow();
        o.revenue_full_sun = entry.revenue_full_sun();
        if (!o.fallow) {
            const auto [par, y] = yield_of(entry);
            o.par_fraction = par;
            o.y_crop = y;
            o.revenue_realized = y * o.revenue_full_sun;
        } else {
            o.revenue_full_sun = 0.0;
            o.y_crop = 0.0;
        }
        out.revenue_full_sun += o.revenue_full_sun;
        out.revenue_realized += o.revenue_realized;
        out.entries.push_back(std::move(o));
    }
    return out;
}

}  // namespace

CropYieldResult rotation_yield(const CropPlan& plan, const YieldSeries& series, const ShadeCurveSet& curves) {
    plan.validate();
    return collect(plan, [&](const CropEntry& e) {
        const double par = seasonal_par_fraction(series, e.months);
        return std::pair{par, curves.at(e.response)(par)};
    });
}

CropYieldResult rotation_yield_uniform(const CropPlan& plan, double y) {
    plan.validate();
    return collect(plan, [&](const CropEntry&) { return std::pair{std::numeric_limits<double>::quiet_NaN(), y}; });
}

}  // namespace agripv
