#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "agripv/economics.hpp"
#include "agripv/error.hpp"

namespace agripv {

std::string_view to_string(TrackerPremium p) {
    return p == TrackerPremium::Multiplicative ? "multiplicative" : "additive";
}

TrackerPremium parse_tracker_premium(std::string_view name) {
    if (name == "multiplicative") return TrackerPremium::Multiplicative;
    if (name == "additive") return TrackerPremium::Additive;
    throw SchemaError(fmt::format("unknown tracker premium mode '{}' (multiplicative|additive)", name));
}

void EconParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw RangeError(fmt::format("econ.{} must be > 0: {}", name, v));
    };
    positive(kappa_M_elevated, "kappa_M_elevated");
    if (kappa_M) positive(*kappa_M, "kappa_M");
    if (!(tracker_premium >= 0.0)) throw RangeError(fmt::format("econ.tracker_premium must be >= 0: {}", tracker_premium));
    positive(rho_L, "rho_L");
    positive(M_L, "M_L");
    positive(a_lm_gmpv, "a_lm_gmpv");
    positive(c_M_gmpv, "c_M_gmpv");
    positive(fit_baseline, "fit_baseline");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw RangeError(fmt::format("econ.epsilon must be in (0,1]: {}", epsilon));
    if (!(d >= 0.0 && d < 1.0)) throw RangeError(fmt::format("econ.d must be in [0,1): {}", d));
    if (!(r >= 0.0 && r < 1.0)) throw RangeError(fmt::format("econ.r must be in [0,1): {}", r));
    if (horizon_years && *horizon_years < 1)
        throw RangeError(fmt::format("econ.horizon_years must be >= 1: {}", *horizon_years));
    if (!(module_efficiency > 0.0 && module_efficiency <= 1.0))
        throw RangeError(fmt::format("econ.module_efficiency must be in (0,1]: {}", module_efficiency));
    if (!(delta_fit_pct >= 0.0)) throw RangeError(fmt::format("econ.delta_fit_pct must be >= 0: {}", delta_fit_pct));
}

double EconParams::kappa_M_for(TrackingMode mode) const {
    if (kappa_M) return *kappa_M;
    if (!is_tracked(mode)) return kappa_M_elevated;
    return premium_mode == TrackerPremium::Multiplicative ? kappa_M_elevated * (1.0 + tracker_premium)
                                                          : kappa_M_elevated + tracker_premium;
}

double chi(double d, double r, std::optional<int> horizon_years) {
    const double q = (1.0 - d) / (1.0 + r);
    if (!horizon_years) {
        if (!(r + d > 0.0)) throw DomainError(fmt::format("chi: series diverges for d={} r={}", d, r));
        return (1.0 - d) / (r + d);
    }
    const int n = *horizon_years;
    if (n < 1) throw DomainError(fmt::format("chi: horizon must be >= 1 year: {}", n));
    if (q == 1.0) return static_cast<double>(n);
    return q * (1.0 - std::pow(q, n)) / (1.0 - q);
}

double kappa_L(double epsilon, double a_lm_av, double M_L, double rho_L) { return epsilon * (a_lm_av / M_L) * rho_L; }

double y_pv_prime(double a_lm_gmpv, double M_L, double y_pv) { return (a_lm_gmpv / M_L + 1.0) * y_pv; }

double price_normalized(double kappa_M, double kappa_L, double y_pv_prime) { return kappa_M + kappa_L - y_pv_prime; }

double pb_normalized(double crop_profit_per_land, double a_lm_av, double c_M_gmpv, double chi) {
    return a_lm_av * crop_profit_per_land / (c_M_gmpv / chi);
}

double fit_coefficient(double fit_baseline, double yy_ref, double y_pv, double chi, double c_M_gmpv) {
    return 0.01 * fit_baseline * yy_ref * y_pv * chi / c_M_gmpv;
}

double apply_fit(double pb_prime, double delta_fit_pct, double fit_baseline, double yy_ref, double y_pv,
                 double chi, double c_M_gmpv) {
    return pb_prime + delta_fit_pct * fit_coefficient(fit_baseline, yy_ref, y_pv, chi, c_M_gmpv);
}

PprValue ppr(double p_prime, double pb_prime) {
    if (pb_prime > 0.0) {
        const double v = p_prime / pb_prime;
        return {v, v <= 1.0};
    }
    // No performance benefit: favourable only if AV is not dearer than GMPV.
    if (p_prime <= 0.0) return {p_prime == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity(), true};
    return {std::numeric_limits<double>::infinity(), false};
}

double delta_fit_threshold(double p_prime, double pb_prime_0, double fit_baseline, double yy_ref, double y_pv,
                           double chi, double c_M_gmpv) {
    const double k = fit_coefficient(fit_baseline, yy_ref, y_pv, chi, c_M_gmpv);
    if (!(k > 0.0)) throw DomainError("delta_fit_threshold: energy coefficient must be > 0");
    return std::max(0.0, (p_prime - pb_prime_0) / k);
}

EconResult evaluate(const EconParams& params, const EconInputs& in) {
    params.validate();
    EconResult out;
    out.chi = chi(params.d, params.r, params.horizon_years);
    out.kappa_M = params.kappa_M_for(in.mode);
    out.kappa_L = kappa_L(params.epsilon, in.a_lm_av, params.M_L, params.rho_L);
    out.y_pv_prime = y_pv_prime(params.a_lm_gmpv, params.M_L, in.y_pv);
    out.p_prime = price_normalized(out.kappa_M, out.kappa_L, out.y_pv_prime);
    out.pb_prime_0 = pb_normalized(in.crop_profit_per_land, in.a_lm_av, params.c_M_gmpv, out.chi);
    out.pb_prime = apply_fit(out.pb_prime_0, params.delta_fit_pct, params.fit_baseline, in.yy_ref, in.y_pv, out.chi,
                             params.c_M_gmpv);
    out.ppr = ppr(out.p_prime, out.pb_prime);
    const double scale = in.module_area * params.c_M_gmpv / out.chi;
    out.p_abs = out.p_prime * scale;
    out.pb_abs = out.pb_prime * scale;
    if (in.y_pv > 0.0 && in.yy_ref > 0.0)
        out.delta_fit_th = delta_fit_threshold(out.p_prime, out.pb_prime_0, params.fit_baseline, in.yy_ref, in.y_pv,
                                               out.chi, params.c_M_gmpv);
    else
        out.delta_fit_th = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace agripv
