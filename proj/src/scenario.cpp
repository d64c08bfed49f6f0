#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "agripv/error.hpp"
#include "agripv/scenario.hpp"

namespace agripv {

namespace pt = boost::property_tree;

std::string_view to_string(Enforcement e) { return e == Enforcement::Monthly ? "monthly" : "seasonal"; }

Enforcement parse_enforcement(std::string_view name) {
    if (name == "monthly") return Enforcement::Monthly;
    if (name == "seasonal") return Enforcement::Seasonal;
    throw SchemaError(fmt::format("unknown enforcement '{}' (monthly|seasonal)", name));
}

void Thresholds::validate() const {
    if (!(theta_energy > 0.0 && theta_energy <= 1.0) && theta_energy != 0.0)
        throw RangeError(fmt::format("thresholds.theta_energy must be in [0,1]: {}", theta_energy));
    if (!(theta_crop > 0.0 && theta_crop <= 1.0) && theta_crop != 0.0)
        throw RangeError(fmt::format("thresholds.theta_crop must be in [0,1]: {}", theta_crop));
    if (period.empty()) throw SchemaError("thresholds.period must name at least one month");
}

std::string scheme_label(const TrackingScheme& scheme) {
    if (scheme.mode == TrackingMode::CT) return fmt::format("CT({})", scheme.st_hours);
    return std::string{to_string(scheme.mode)};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto end = s.find(sep, start);
        out.push_back(trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

double to_double(std::string_view s, std::string_view key) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw SchemaError(fmt::format("{}: expected a number, got '{}'", key, s));
    return v;
}

int to_int(std::string_view s, std::string_view key) {
    s = trim(s);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw SchemaError(fmt::format("{}: expected an integer, got '{}'", key, s));
    return v;
}

// Decimal dollars with at most two fractional digits, held exactly.
std::int64_t to_cents(std::string_view s, std::string_view key) {
    s = trim(s);
    const auto dot = s.find('.');
    const auto whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() || frac.size() > 2 || !std::all_of(whole.begin(), whole.end(), ::isdigit) ||
        !std::all_of(frac.begin(), frac.end(), ::isdigit))
        throw SchemaError(fmt::format("{}: expected a revenue like 123.45, got '{}'", key, s));
    std::int64_t cents = 0;
    for (char c : whole) cents = cents * 10 + (c - '0');
    cents *= 100;
    if (frac.size() >= 1) cents += 10 * (frac[0] - '0');
    if (frac.size() == 2) cents += frac[1] - '0';
    return cents;
}

std::string cents_text(std::int64_t cents) { return fmt::format("{}.{:02}", cents / 100, cents % 100); }

std::vector<double> to_doubles(std::string_view s, std::string_view key) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (auto item : split(s, ',')) out.push_back(to_double(item, key));
    return out;
}

std::vector<std::string> to_words(std::string_view s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    for (auto item : split(s, ',')) out.emplace_back(item);
    return out;
}

std::string num(double v) { return fmt::format("{}", v); }

template <class T>
std::string join(const std::vector<T>& xs, auto&& fmt_one) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += fmt_one(xs[i]);
    }
    return out;
}

const std::map<std::string, std::set<std::string>, std::less<>>& schema() {
    static const std::map<std::string, std::set<std::string>, std::less<>> s{
        {"site", {"name", "latitude", "longitude", "utc_offset", "albedo"}},
        {"weather", {"path", "format"}},
        {"layout", {"a_lm", "pitch", "module_width", "hub_height", "bifacial_rear_weight", "ground_points"}},
        {"scheme", {"mode", "st_hours", "rotation_limit", "fixed_tilt"}},
        {"crops", {"plan", "response", "curves"}},
        {"econ",
         {"kappa_M", "kappa_M_elevated", "tracker_premium", "tracker_premium_mode", "rho_L", "epsilon", "M_L",
          "a_lm_gmpv", "d", "r", "horizon_years", "c_M_gmpv", "fit_baseline", "module_efficiency", "delta_fit"}},
        {"thresholds", {"theta_energy", "theta_crop", "enforcement", "period"}},
        {"sweep", {"site", "M_L", "a_lm", "scheme", "crop_plan", "delta_fit", "max_cells"}},
    };
    return s;
}

const std::set<std::string>& site_section_keys() {
    static const std::set<std::string> s{"name",   "latitude",    "longitude",
                                         "utc_offset", "albedo", "weather_path", "weather_format"};
    return s;
}

bool is_entry_key(std::string_view key) {
    return key.size() > 5 && key.substr(0, 5) == "entry" &&
           std::all_of(key.begin() + 5, key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Section {
public:
    Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    std::optional<std::string> get(std::string_view key) const {
        if (!tree_) return std::nullopt;
        const auto it = tree_->find(std::string{key});
        if (it == tree_->not_found()) return std::nullopt;
        return std::string{trim(it->second.data())};
    }
    std::string path(std::string_view key) const { return fmt::format("{}.{}", name_, key); }

    template <class F>
    void number(std::string_view key, F&& assign) const {
        if (auto v = get(key)) assign(to_double(*v, path(key)));
    }

private:
    const pt::ptree* tree_;
    std::string name_;
};

std::filesystem::path resolve(const std::string& value, const std::filesystem::path& base_dir) {
    std::filesystem::path p{value};
    if (p.is_relative()) p = base_dir / p;
    return p.lexically_normal();
}

void read_site(const Section& s, SiteConfig& site, bool require_coords) {
    if (auto v = s.get("name")) site.name = *v;
    const auto lat = s.get("latitude");
    const auto lon = s.get("longitude");
    if (require_coords && (!lat || !lon))
        throw SchemaError(fmt::format("{} and {} are required", s.path("latitude"), s.path("longitude")));
    if (lat) site.latitude = to_double(*lat, s.path("latitude"));
    if (lon) site.longitude = to_double(*lon, s.path("longitude"));
    if (auto v = s.get("utc_offset"))
        site.utc_offset = to_double(*v, s.path("utc_offset"));
    else
        site.utc_offset = std::round(site.longitude / 15.0);
    s.number("albedo", [&](double v) { site.albedo = v; });
}

}  // namespace

TrackingScheme parse_scheme_label(std::string_view label, double rotation_limit) {
    label = trim(label);
    if (label.size() > 4 && label.substr(0, 3) == "CT(" && label.back() == ')') {
        TrackingScheme s = TrackingScheme::customized(to_double(label.substr(3, label.size() - 4), "scheme"),
                                                      rotation_limit);
        s.validate();
        return s;
    }
    TrackingScheme s;
    s.mode = parse_tracking_mode(label);
    if (s.mode == TrackingMode::CT) throw SchemaError("scheme CT needs hours, e.g. CT(6)");
    if (is_tracked(s.mode)) s.rotation_limit = rotation_limit;
    return s;
}

std::size_t SweepSpec::cell_count() const {
    auto n = [](std::size_t k) { return std::max<std::size_t>(k, 1); };
    return n(site.size()) * n(M_L.size()) * n(a_lm.size()) * n(scheme.size()) * n(crop_plan.size()) *
           n(delta_fit.size());
}

void SweepSpec::validate() const {
    if (max_cells == 0) throw RangeError("sweep.max_cells must be >= 1");
    if (cell_count() > max_cells)
        throw RangeError(fmt::format("sweep has {} cells, above sweep.max_cells = {}", cell_count(), max_cells));
    for (double v : a_lm)
        if (!(v >= 1.0)) throw RangeError(fmt::format("sweep.a_lm values must be >= 1: {}", v));
    for (double v : M_L)
        if (!(v > 0.0)) throw RangeError(fmt::format("sweep.M_L values must be > 0: {}", v));
    for (double v : delta_fit)
        if (!(v >= 0.0)) throw RangeError(fmt::format("sweep.delta_fit values must be >= 0: {}", v));
    for (const auto& s : scheme) s.validate();
}

void Scenario::validate() const {
    base.site.validate();
    for (const auto& [name, v] : sites) {
        if (name == "base") throw SchemaError("site section name 'base' is reserved");
        v.site.validate();
    }
    layout.validate();
    scheme.validate();
    econ.validate();
    thresholds.validate();
    sweep.validate();
    for (const auto& name : sweep.site) site_variant(name);
    for (const auto& name : sweep.crop_plan) plan(name).validate();
    plan().validate();
    curves().at(crop_response);
}

CropPlan Scenario::plan(std::string_view name) const {
    if (name == "custom") {
        if (custom_entries.empty()) throw SchemaError("crops.plan = custom needs crops.entryN lines");
        return CropPlan{"custom", custom_entries};
    }
    return builtin_crop_plan(name).with_response(crop_response);
}

ShadeCurveSet Scenario::curves() const {
    return crop_curves ? ShadeCurveSet::load(*crop_curves) : ShadeCurveSet::defaults();
}

const SiteVariant& Scenario::site_variant(std::string_view name) const {
    if (name == "base") return base;
    const auto it = sites.find(std::string{name});
    if (it == sites.end()) throw SchemaError(fmt::format("sweep.site: no [site:{}] section", name));
    return it->second;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string{text}};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw SchemaError(fmt::format("scenario: line {}: {}", e.line(), e.message()));
    }

    Scenario sc;
    for (const auto& [section, body] : tree) {
        if (section.rfind("site:", 0) == 0) {
            for (const auto& [key, _] : body)
                if (!site_section_keys().count(key))
                    throw SchemaError(fmt::format("unknown key {}.{}", section, key));
            continue;
        }
        const auto it = schema().find(section);
        if (it == schema().end()) {
            if (body.empty() && !body.data().empty())
                throw SchemaError(fmt::format("key '{}' outside any section", section));
            throw SchemaError(fmt::format("unknown section [{}]", section));
        }
        for (const auto& [key, _] : body)
            if (!it->second.count(key) && !(section == "crops" && is_entry_key(key)))
                throw SchemaError(fmt::format("unknown key {}.{}", section, key));
    }

    auto section = [&](const std::string& name) {
        const auto it = tree.find(name);
        return Section{it == tree.not_found() ? nullptr : &it->second, name};
    };

    {
        const auto s = section("site");
        read_site(s, sc.base.site, true);
        const auto w = section("weather");
        const auto path = w.get("path");
        if (!path) throw SchemaError("weather.path is required");
        sc.base.weather.path = resolve(*path, base_dir);
        if (auto f = w.get("format")) sc.base.weather.format = parse_weather_format(*f);
    }

    for (const auto& [name, body] : tree) {
        if (name.rfind("site:", 0) != 0) continue;
        const std::string key = name.substr(5);
        if (key.empty()) throw SchemaError("site section needs a name: [site:NAME]");
        const Section s{&body, name};
        SiteVariant v;
        v.site.name = key;
        read_site(s, v.site, true);
        const auto path = s.get("weather_path");
        if (!path) throw SchemaError(fmt::format("{} is required", s.path("weather_path")));
        v.weather.path = resolve(*path, base_dir);
        if (auto f = s.get("weather_format")) v.weather.format = parse_weather_format(*f);
        sc.sites.emplace(key, std::move(v));
    }

    {
        const auto s = section("layout");
        double width = sc.layout.module_width;
        s.number("module_width", [&](double v) { width = v; });
        const auto a = s.get("a_lm");
        const auto p = s.get("pitch");
        if (a && p) throw SchemaError("layout.a_lm and layout.pitch are mutually exclusive");
        sc.layout.module_width = width;
        sc.layout.pitch = p ? to_double(*p, s.path("pitch")) : (a ? to_double(*a, s.path("a_lm")) : 2.0) * width;
        s.number("hub_height", [&](double v) { sc.layout.hub_height = v; });
        s.number("bifacial_rear_weight", [&](double v) { sc.layout.bifacial_rear_weight = v; });
        if (auto v = s.get("ground_points")) sc.layout.ground_points = to_int(*v, s.path("ground_points"));
    }

    {
        const auto s = section("scheme");
        if (auto v = s.get("mode")) sc.scheme.mode = parse_tracking_mode(*v);
        s.number("st_hours", [&](double v) { sc.scheme.st_hours = v; });
        s.number("rotation_limit", [&](double v) { sc.scheme.rotation_limit = v; });
        s.number("fixed_tilt", [&](double v) { sc.scheme.fixed_tilt = v; });
    }

    {
        const auto s = section("crops");
        if (auto v = s.get("plan")) sc.crop_plan = *v;
        if (auto v = s.get("response")) sc.crop_response = *v;
        if (auto v = s.get("curves")) sc.crop_curves = resolve(*v, base_dir);
        if (const auto it = tree.find("crops"); it != tree.not_found()) {
            std::vector<std::pair<int, CropEntry>> entries;
            for (const auto& [key, value] : it->second) {
                if (!is_entry_key(key)) continue;
                const auto parts = split(trim(value.data()), '|');
                const std::string path = fmt::format("crops.{}", key);
                if (parts.size() != 4)
                    throw SchemaError(fmt::format("{}: expected 'months|crop|revenue|response'", path));
                CropEntry e;
                e.months = MonthSet::parse(parts[0]);
                e.crop_name = std::string{parts[1]};
                e.revenue_cents = to_cents(parts[2], path);
                e.response = std::string{parts[3]};
                entries.emplace_back(to_int(key.substr(5), path), std::move(e));
            }
            std::sort(entries.begin(), entries.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
            for (auto& [_, e] : entries) sc.custom_entries.push_back(std::move(e));
        }
    }

    {
        const auto s = section("econ");
        auto& e = sc.econ;
        s.number("kappa_M", [&](double v) { e.kappa_M = v; });
        s.number("kappa_M_elevated", [&](double v) { e.kappa_M_elevated = v; });
        s.number("tracker_premium", [&](double v) { e.tracker_premium = v; });
        if (auto v = s.get("tracker_premium_mode")) e.premium_mode = parse_tracker_premium(*v);
        s.number("rho_L", [&](double v) { e.rho_L = v; });
        s.number("epsilon", [&](double v) { e.epsilon = v; });
        s.number("M_L", [&](double v) { e.M_L = v; });
        s.number("a_lm_gmpv", [&](double v) { e.a_lm_gmpv = v; });
        s.number("d", [&](double v) { e.d = v; });
        s.number("r", [&](double v) { e.r = v; });
        if (auto v = s.get("horizon_years")) {
            if (*v != "infinite") e.horizon_years = to_int(*v, s.path("horizon_years"));
        }
        s.number("c_M_gmpv", [&](double v) { e.c_M_gmpv = v; });
        s.number("fit_baseline", [&](double v) { e.fit_baseline = v; });
        s.number("module_efficiency", [&](double v) { e.module_efficiency = v; });
        s.number("delta_fit", [&](double v) { e.delta_fit_pct = v; });
    }

    {
        const auto s = section("thresholds");
        s.number("theta_energy", [&](double v) { sc.thresholds.theta_energy = v; });
        s.number("theta_crop", [&](double v) { sc.thresholds.theta_crop = v; });
        if (auto v = s.get("enforcement")) sc.thresholds.enforcement = parse_enforcement(*v);
        if (auto v = s.get("period")) sc.thresholds.period = MonthSet::parse(*v);
    }

    {
        const auto s = section("sweep");
        auto& w = sc.sweep;
        if (auto v = s.get("site")) w.site = to_words(*v);
        if (auto v = s.get("M_L")) w.M_L = to_doubles(*v, s.path("M_L"));
        if (auto v = s.get("a_lm")) w.a_lm = to_doubles(*v, s.path("a_lm"));
        if (auto v = s.get("scheme"))
            for (const auto& label : to_words(*v)) w.scheme.push_back(parse_scheme_label(label, sc.scheme.rotation_limit));
        if (auto v = s.get("crop_plan")) w.crop_plan = to_words(*v);
        if (auto v = s.get("delta_fit")) w.delta_fit = to_doubles(*v, s.path("delta_fit"));
        if (auto v = s.get("max_cells")) {
            const int n = to_int(*v, s.path("max_cells"));
            if (n < 1) throw RangeError(fmt::format("sweep.max_cells must be >= 1: {}", n));
            w.max_cells = static_cast<std::size_t>(n);
        }
    }

    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(fmt::format("cannot open scenario file {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.parent_path());
}

std::string serialize_scenario(const Scenario& s) {
    std::string out;
    auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
    auto site_lines = [&](const SiteConfig& site) {
        line("name", site.name);
        line("latitude", num(site.latitude));
        line("longitude", num(site.longitude));
        line("utc_offset", num(site.utc_offset));
        line("albedo", num(site.albedo));
    };

    out += "[site]\n";
    site_lines(s.base.site);
    out += "\n[weather]\n";
    line("path", s.base.weather.path.string());
    line("format", std::string{to_string(s.base.weather.format)});

    out += "\n[layout]\n";
    line("pitch", num(s.layout.pitch));
    line("module_width", num(s.layout.module_width));
    line("hub_height", num(s.layout.hub_height));
    if (s.layout.bifacial_rear_weight) line("bifacial_rear_weight", num(*s.layout.bifacial_rear_weight));
    line("ground_points", fmt::format("{}", s.layout.ground_points));

    out += "\n[scheme]\n";
    line("mode", std::string{to_string(s.scheme.mode)});
    if (s.scheme.mode == TrackingMode::CT) line("st_hours", num(s.scheme.st_hours));
    line("rotation_limit", num(s.scheme.rotation_limit));
    if (s.scheme.fixed_tilt) line("fixed_tilt", num(*s.scheme.fixed_tilt));

    out += "\n[crops]\n";
    line("plan", s.crop_plan);
    line("response", s.crop_response);
    if (s.crop_curves) line("curves", s.crop_curves->string());
    for (std::size_t i = 0; i < s.custom_entries.size(); ++i) {
        const auto& e = s.custom_entries[i];
        line(fmt::format("entry{}", i + 1),
             fmt::format("{}|{}|{}|{}", e.months.to_string(), e.crop_name, cents_text(e.revenue_cents), e.response));
    }

    out += "\n[econ]\n";
    const auto& e = s.econ;
    if (e.kappa_M) line("kappa_M", num(*e.kappa_M));
    line("kappa_M_elevated", num(e.kappa_M_elevated));
    line("tracker_premium", num(e.tracker_premium));
    line("tracker_premium_mode", std::string{to_string(e.premium_mode)});
    line("rho_L", num(e.rho_L));
    line("epsilon", num(e.epsilon));
    line("M_L", num(e.M_L));
    line("a_lm_gmpv", num(e.a_lm_gmpv));
    line("d", num(e.d));
    line("r", num(e.r));
    line("horizon_years", e.horizon_years ? fmt::format("{}", *e.horizon_years) : std::string{"infinite"});
    line("c_M_gmpv", num(e.c_M_gmpv));
    line("fit_baseline", num(e.fit_baseline));
    line("module_efficiency", num(e.module_efficiency));
    line("delta_fit", num(e.delta_fit_pct));

    out += "\n[thresholds]\n";
    line("theta_energy", num(s.thresholds.theta_energy));
    line("theta_crop", num(s.thresholds.theta_crop));
    line("enforcement", std::string{to_string(s.thresholds.enforcement)});
    line("period", s.thresholds.period.to_string());

    const auto& w = s.sweep;
    out += "\n[sweep]\n";
    auto str = [](const std::string& x) { return x; };
    if (!w.site.empty()) line("site", join(w.site, str));
    if (!w.M_L.empty()) line("M_L", join(w.M_L, num));
    if (!w.a_lm.empty()) line("a_lm", join(w.a_lm, num));
    if (!w.scheme.empty()) line("scheme", join(w.scheme, scheme_label));
    if (!w.crop_plan.empty()) line("crop_plan", join(w.crop_plan, str));
    if (!w.delta_fit.empty()) line("delta_fit", join(w.delta_fit, num));
    line("max_cells", fmt::format("{}", w.max_cells));

    for (const auto& [name, v] : s.sites) {
        out += fmt::format("\n[site:{}]\n", name);
        site_lines(v.site);
        line("weather_path", v.weather.path.string());
        line("weather_format", std::string{to_string(v.weather.format)});
    }
    return out;
}

WeatherSeries load_site_weather(const SiteVariant& site) {
    return load_weather(site.weather.path, site.weather.format, site.site);
}

}  // namespace agripv
