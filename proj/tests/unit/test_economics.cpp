#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "agripv/economics.hpp"
#include "agripv/error.hpp"
#include "oracles.hpp"

using namespace agripv;

namespace {

constexpr double kHvPerM2 = 9192.34 / 1e4;  // $/m2/yr
constexpr double kLvPerM2 = 298.31 / 1e4;

}  // namespace

TEST_SUITE("economics") {
    TEST_CASE("chi closed form, direct summation and limits") {
        CHECK(chi(0.01, 0.05) == doctest::Approx(16.5).epsilon(1e-14));
        const double direct = oracle::chi_direct(0.01, 0.05, 10000);
        CHECK(std::abs(chi(0.01, 0.05) - direct) / direct < 1e-10);
        CHECK(chi(0.01, 0.05, 1) == doctest::Approx(0.99 / 1.05).epsilon(1e-15));
        CHECK(chi(0.01, 0.05, 10000) == doctest::Approx(direct).epsilon(1e-10));
        CHECK(chi(0.01, 1e6) < 1e-5);
        CHECK_THROWS_AS(chi(0.0, 0.0), DomainError);
        CHECK_THROWS_AS(chi(0.01, 0.05, 0), DomainError);
    }

    TEST_CASE("kappa_L and Y'_PV arithmetic") {
        CHECK(kappa_L(0.5, 4.0, 10.0, 1.0) == doctest::Approx(0.2));
        CHECK(kappa_L(0.5, 8.0, 10.0, 1.0) == doctest::Approx(2.0 * kappa_L(0.5, 4.0, 10.0, 1.0)));
        CHECK(kappa_L(0.5, 4.0, 30.0, 1.0) == doctest::Approx(kappa_L(0.5, 4.0, 10.0, 1.0) / 3.0));
        CHECK(y_pv_prime(2.0, 10.0, 1.0) == doctest::Approx(1.2));
        CHECK(y_pv_prime(2.0, 10.0, 0.0) == 0.0);
        CHECK(y_pv_prime(2.0, 1e12, 0.9) == doctest::Approx(0.9));
    }

    TEST_CASE("normalized price examples") {
        CHECK(price_normalized(1.0, kappa_L(1.0, 2.0, 10.0, 1.0), y_pv_prime(2.0, 10.0, 1.0)) ==
              doctest::Approx(0.0).scale(1.0));
        CHECK(price_normalized(1.38, kappa_L(0.5, 4.0, 10.0, 1.0), y_pv_prime(2.0, 10.0, 1.0)) ==
              doctest::Approx(0.38));
        EconParams p;
        CHECK(p.kappa_M_for(TrackingMode::ST) == doctest::Approx(1.38 * 1.2));
        CHECK(p.kappa_M_for(TrackingMode::NsFixed) == doctest::Approx(1.38));
        p.premium_mode = TrackerPremium::Additive;
        CHECK(p.kappa_M_for(TrackingMode::AT) == doctest::Approx(1.58));
        p.kappa_M = 1.1;
        CHECK(p.kappa_M_for(TrackingMode::AT) == 1.1);
    }

    TEST_CASE("typical tracked configurations land in the published p' band") {
        const EconParams p;
        for (auto [a_lm, M_L, y] : {std::tuple{2.0, 10.0, 1.1}, {3.0, 10.0, 1.1}, {2.0, 30.0, 1.1}}) {
            const double pp = price_normalized(p.kappa_M_for(TrackingMode::ST), kappa_L(p.epsilon, a_lm, M_L, p.rho_L),
                                               y_pv_prime(2.0, M_L, y));
            CHECK(pp >= 0.4);
            CHECK(pp <= 0.8);
        }
    }

    TEST_CASE("normalized performance examples") {
        CHECK(pb_normalized(0.0, 2.0, 100.0, 16.5) == 0.0);
        CHECK(pb_normalized(0.8 * kHvPerM2, 2.0, 100.0, 16.5) == doctest::Approx(0.2427).epsilon(2e-4));
        const double lv = pb_normalized(0.8 * kLvPerM2, 2.0, 100.0, 16.5);
        CHECK(lv >= 0.001);
        CHECK(lv <= 0.01);
    }

    TEST_CASE("FIT premium is linear") {
        const double base = 0.2;
        CHECK(apply_fit(base, 0.0, 0.06, 300.0, 1.1, 16.5, 100.0) == base);
        const double t10 = apply_fit(base, 10.0, 0.06, 300.0, 1.1, 16.5, 100.0) - base;
        const double t20 = apply_fit(base, 20.0, 0.06, 300.0, 1.1, 16.5, 100.0) - base;
        CHECK(t20 == doctest::Approx(2.0 * t10).epsilon(1e-14));
        CHECK(t10 == doctest::Approx(0.10 * 0.06 * 300.0 * 1.1 * 16.5 / 100.0).epsilon(1e-14));
    }

    TEST_CASE("ppr examples") {
        CHECK(ppr(0.38, 0.2427).value == doctest::Approx(1.566).epsilon(1e-3));
        CHECK_FALSE(ppr(0.38, 0.2427).feasible);
        CHECK(ppr(-0.1, 0.2).feasible);
        CHECK(ppr(-0.1, 0.2).value <= 0.0);
        CHECK(ppr(0.5, 0.0).value == std::numeric_limits<double>::infinity());
        CHECK_FALSE(ppr(0.5, 0.0).feasible);
        CHECK(ppr(0.0, 0.0).feasible);
        CHECK(ppr(0.3 * 7.0, 0.2 * 7.0).value == doctest::Approx(ppr(0.3, 0.2).value).epsilon(1e-15));
    }

    TEST_CASE("threshold closed form equals a bisection root") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> p(-0.2, 1.5), pb(0.0, 0.5), fit(0.03, 0.1), yy(150.0, 450.0),
            y(0.5, 1.3), x(5.0, 25.0), c(50.0, 200.0);
        for (int i = 0; i < 50; ++i) {
            const double a = p(rng), b = pb(rng), f = fit(rng), e = yy(rng), v = y(rng), xi = x(rng), cm = c(rng);
            const double closed = delta_fit_threshold(a, b, f, e, v, xi, cm);
            const double oracle = oracle::bisect_threshold(a, b, f, e, v, xi, cm);
            CHECK(std::abs(closed - oracle) <= 1e-9 * std::max(1.0, oracle));
        }
    }

    TEST_CASE("threshold monotonicity and already-feasible systems") {
        CHECK(delta_fit_threshold(0.2, 0.3, 0.06, 300, 1.0, 16.5, 100) == 0.0);
        double prev = std::numeric_limits<double>::infinity();
        for (double pb0 = 0.0; pb0 <= 1.0; pb0 += 0.05) {
            const double t = delta_fit_threshold(0.6, pb0, 0.06, 300, 1.0, 16.5, 100);
            CHECK(t <= prev);
            prev = t;
        }
        prev = 0.0;
        for (double pp = -0.5; pp <= 1.5; pp += 0.1) {
            const double t = delta_fit_threshold(pp, 0.3, 0.06, 300, 1.0, 16.5, 100);
            CHECK(t >= prev);
            prev = t;
        }
        CHECK_THROWS_AS(delta_fit_threshold(0.6, 0.3, 0.06, 0.0, 1.0, 16.5, 100), DomainError);
    }

    TEST_CASE("ppr is strictly decreasing in the FIT premium") {
        double prev = std::numeric_limits<double>::infinity();
        for (double dfit = 0.0; dfit <= 50.0; dfit += 2.5) {
            const double v = ppr(0.6, apply_fit(0.1, dfit, 0.06, 300, 1.1, 16.5, 100)).value;
            CHECK(v < prev);
            prev = v;
        }
    }

    TEST_CASE("evaluate: decomposition into absolute costs") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> a_lm(2.0, 6.0), M_L(5.0, 35.0), y(0.6, 1.3), eps(0.3, 1.0),
            rho(0.5, 3.0), cm(50.0, 200.0), area(1.0, 1e4);
        for (int i = 0; i < 50; ++i) {
            EconParams p;
            p.M_L = M_L(rng);
            p.epsilon = eps(rng);
            p.rho_L = rho(rng);
            p.c_M_gmpv = cm(rng);
            EconInputs in{TrackingMode::ST, a_lm(rng), y(rng), 300.0, 0.5, area(rng)};
            const auto r = evaluate(p, in);
            // Absolute price built from physical costs.
            const double x = chi(p.d, p.r);
            const double c_M_av = p.kappa_M_for(in.mode) * p.c_M_gmpv;
            const double c_L_gmpv = p.c_M_gmpv / p.M_L;
            const double c_L_av = p.rho_L * c_L_gmpv;
            const double A_M = in.module_area;
            const double price = (c_M_av / p.c_M_gmpv + p.epsilon * in.a_lm_av * c_L_av / p.c_M_gmpv -
                                  (p.a_lm_gmpv * c_L_gmpv / p.c_M_gmpv + 1.0) * in.y_pv) *
                                 p.c_M_gmpv * A_M / x;
            CHECK(std::abs(r.p_abs - price) <= 1e-12 * std::abs(price));
            CHECK(std::abs(r.p_prime - price / (A_M * p.c_M_gmpv / x)) <= 1e-12 * std::abs(r.p_prime));
            CHECK(r.p_prime == doctest::Approx(r.kappa_M + r.kappa_L - r.y_pv_prime).epsilon(1e-15));
        }
    }

    TEST_CASE("feasibility is invariant to the module cost scale") {
        EconParams p;
        EconInputs in{TrackingMode::ST, 3.0, 1.1, 300.0, 0.8 * kHvPerM2, 1.0};
        p.delta_fit_pct = 10.0;
        const auto base = evaluate(p, in);
        for (double s : {0.1, 3.0, 50.0}) {
            EconParams q = p;
            q.c_M_gmpv *= s;
            EconInputs j = in;
            j.crop_profit_per_land *= s;
            q.fit_baseline *= s;  // every monetary quantity shares the scale
            const auto r = evaluate(q, j);
            CHECK(r.ppr.feasible == base.ppr.feasible);
            CHECK(r.ppr.value == doctest::Approx(base.ppr.value).epsilon(1e-12));
            CHECK(r.p_abs == doctest::Approx(base.p_abs * s).epsilon(1e-12));
        }
    }

    TEST_CASE("low-value crops need a larger FIT premium") {
        EconParams p;
        const auto hv = evaluate(p, {TrackingMode::ST, 3.0, 1.1, 300.0, 0.8 * kHvPerM2, 1.0});
        const auto lv = evaluate(p, {TrackingMode::ST, 3.0, 1.1, 300.0, 0.8 * kLvPerM2, 1.0});
        CHECK(lv.delta_fit_th > hv.delta_fit_th);
        CHECK(lv.ppr.value > hv.ppr.value);
    }

    TEST_CASE("parameter validation") {
        EconParams p;
        CHECK_NOTHROW(p.validate());
        p.epsilon = 1.5;
        CHECK_THROWS_AS(p.validate(), RangeError);
        p = EconParams{};
        p.r = 1.0;
        CHECK_THROWS_AS(p.validate(), RangeError);
        p = EconParams{};
        p.M_L = -1.0;
        CHECK_THROWS_AS(p.validate(), RangeError);
        p = EconParams{};
        p.horizon_years = 0;
        CHECK_THROWS_AS(p.validate(), RangeError);
        p = EconParams{};
        p.M_L = 40.0;
        CHECK(p.M_L_atypical());
        CHECK_THROWS_AS(parse_tracker_premium("compound"), SchemaError);
    }
}
