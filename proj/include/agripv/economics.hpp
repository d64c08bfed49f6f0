#pragma once

#include <optional>
#include <string_view>

#include "agripv/solar.hpp"

namespace agripv {

enum class TrackerPremium { Multiplicative, Additive };

std::string_view to_string(TrackerPremium p);
TrackerPremium parse_tracker_premium(std::string_view name);

struct EconParams {
    double kappa_M_elevated = 1.38;  // c_M,AV / c_M,GMPV for elevated fixed mounting
    double tracker_premium = 0.2;    // extra hardware share for trackers
    TrackerPremium premium_mode = TrackerPremium::Multiplicative;
    std::optional<double> kappa_M;   // overrides the two fields above when set
    double rho_L = 2.0;              // c_L,AV / c_L,GMPV
    double epsilon = 0.75;           // soft-cost scaling with land area
    double M_L = 10.0;               // c_M / c_L
    double a_lm_gmpv = 2.0;
    double d = 0.01;                 // depreciation, 1/yr
    double r = 0.05;                 // discount, 1/yr
    std::optional<int> horizon_years;  // unset: infinite
    double c_M_gmpv = 100.0;         // $/m2 of module
    double fit_baseline = 0.06;      // $/kWh
    double module_efficiency = 0.2;  // converts POA kWh/m2 to electrical kWh/m2
    double delta_fit_pct = 0.0;      // FIT premium for AV, % of baseline

    /// Ratios > 0, epsilon in (0,1], d and r in [0,1), horizon >= 1.
    void validate() const;
    /// M_L outside the 5..35 band observed worldwide.
    bool M_L_atypical() const { return M_L < 5.0 || M_L > 35.0; }
    double kappa_M_for(TrackingMode mode) const;

    friend bool operator==(const EconParams&, const EconParams&) = default;
};

/// Discounted depreciation factor: sum over k >= 1 of ((1-d)/(1+r))^k.
double chi(double d, double r, std::optional<int> horizon_years = std::nullopt);

double kappa_L(double epsilon, double a_lm_av, double M_L, double rho_L);
double y_pv_prime(double a_lm_gmpv, double M_L, double y_pv);
double price_normalized(double kappa_M, double kappa_L, double y_pv_prime);

/// crop_profit_per_land in $/m2/yr of land.
double pb_normalized(double crop_profit_per_land, double a_lm_av, double c_M_gmpv, double chi);

/// Multiplier of delta_fit (in %) in the performance term.
double fit_coefficient(double fit_baseline, double yy_ref, double y_pv, double chi, double c_M_gmpv);

double apply_fit(double pb_prime, double delta_fit_pct, double fit_baseline, double yy_ref, double y_pv,
                 double chi, double c_M_gmpv);

struct PprValue {
    double value = 0.0;  // +inf when pb' = 0 and p' > 0
    bool feasible = false;
};
PprValue ppr(double p_prime, double pb_prime);

/// Smallest delta_fit (%) with ppr <= 1; 0 if already feasible.
double delta_fit_threshold(double p_prime, double pb_prime_0, double fit_baseline, double yy_ref, double y_pv,
                           double chi, double c_M_gmpv);

struct EconInputs {
    TrackingMode mode = TrackingMode::ST;
    double a_lm_av = 2.0;
    double y_pv = 1.0;
    double yy_ref = 0.0;                 // kWh/m2/yr electrical, reference module
    double crop_profit_per_land = 0.0;   // $/m2/yr, realized under shading
    double module_area = 1.0;            // m2, scales absolute outputs only
};

struct EconResult {
    double chi = 0.0;
    double kappa_M = 0.0;
    double kappa_L = 0.0;
    double y_pv_prime = 0.0;
    double p_prime = 0.0;
    double pb_prime_0 = 0.0;  // without FIT premium
    double pb_prime = 0.0;    // with params.delta_fit_pct
    PprValue ppr;
    double p_abs = 0.0;   // $
    double pb_abs = 0.0;  // $
    double delta_fit_th = 0.0;  // %
};

EconResult evaluate(const EconParams& params, const EconInputs& in);

}  // namespace agripv
