#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agripv/agronomy.hpp"
#include "agripv/crops.hpp"
#include "agripv/economics.hpp"
#include "agripv/optics.hpp"
#include "agripv/solar.hpp"
#include "agripv/weather.hpp"

namespace agripv {

/// Monthly: every month of the period must pass. Seasonal: the
/// period-aggregate Y_PV and Y_Crop must pass.
enum class Enforcement { Monthly, Seasonal };

std::string_view to_string(Enforcement e);
Enforcement parse_enforcement(std::string_view name);

struct Thresholds {
    double theta_energy = 0.8;
    double theta_crop = 0.8;
    Enforcement enforcement = Enforcement::Monthly;
    MonthSet period = MonthSet::all();

    void validate() const;
    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

/// "ST", "AT", "NS_FIXED", "EW_VERTICAL", or "CT(n)" with n in hours.
std::string scheme_label(const TrackingScheme& scheme);
TrackingScheme parse_scheme_label(std::string_view label, double rotation_limit = 90.0);

struct WeatherSource {
    std::filesystem::path path;
    WeatherFormat format = WeatherFormat::Csv;

    friend bool operator==(const WeatherSource&, const WeatherSource&) = default;
};

struct SiteVariant {
    SiteConfig site;
    WeatherSource weather;

    friend bool operator==(const SiteVariant&, const SiteVariant&) = default;
};

/// Axes left empty take the base scenario's value.
struct SweepSpec {
    std::vector<std::string> site;  // "base" or names of [site:NAME] sections
    std::vector<double> M_L;
    std::vector<double> a_lm;
    std::vector<TrackingScheme> scheme;
    std::vector<std::string> crop_plan;
    std::vector<double> delta_fit;
    std::size_t max_cells = 10000;

    std::size_t cell_count() const;
    void validate() const;
    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct Scenario {
    SiteVariant base;
    std::map<std::string, SiteVariant> sites;  // extra sites for the sweep axis
    ArrayLayout layout = ArrayLayout::from_a_lm(2.0);
    TrackingScheme scheme = TrackingScheme::standard();
    std::string crop_plan = "HV";      // LV, HV, or custom
    std::vector<CropEntry> custom_entries;
    std::string crop_response = "T";   // curve used for feasibility and for built-in plans
    std::optional<std::filesystem::path> crop_curves;
    EconParams econ;
    Thresholds thresholds;
    SweepSpec sweep;

    void validate() const;
    /// Resolves a plan name ("LV", "HV", "custom") against this scenario.
    CropPlan plan(std::string_view name) const;
    CropPlan plan() const { return plan(crop_plan); }
    ShadeCurveSet curves() const;
    /// "base" or an extra site name.
    const SiteVariant& site_variant(std::string_view name) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// INI-style text: sections [site] [weather] [layout] [scheme] [crops]
/// [econ] [thresholds] [sweep] [site:NAME]. Unknown sections or keys are
/// SchemaErrors; relative paths resolve against base_dir.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Writes every field explicitly; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

WeatherSeries load_site_weather(const SiteVariant& site);

}  // namespace agripv
