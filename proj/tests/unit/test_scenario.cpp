#include <doctest.h>

#include <string>

#include "agripv/error.hpp"
#include "agripv/scenario.hpp"
#include "support.hpp"

using namespace agripv;

namespace {

const std::string kMinimal = R"(
[site]
latitude = 30.2864
longitude = 71.9320

[weather]
path = weather.csv
)";

Scenario parse(const std::string& text) { return parse_scenario(text, "/data/base"); }

}  // namespace

TEST_SUITE("scenario") {
    TEST_CASE("a minimal scenario takes documented defaults") {
        const auto s = parse(kMinimal);
        CHECK(s.base.weather.path == "/data/base/weather.csv");
        CHECK(s.base.weather.format == WeatherFormat::Csv);
        CHECK(s.base.site.utc_offset == 5.0);  // round(longitude / 15)
        CHECK(s.base.site.albedo == 0.25);
        CHECK(s.layout.a_lm() == doctest::Approx(2.0));
        CHECK(s.layout.ground_points == 100);
        CHECK(s.scheme == TrackingScheme::standard());
        CHECK(s.crop_plan == "HV");
        CHECK(s.econ == EconParams{});
        CHECK(s.thresholds == Thresholds{});
        CHECK(s.sweep.cell_count() == 1);
    }

    TEST_CASE("out-of-range values are range errors") {
        CHECK_THROWS_AS(parse(kMinimal + "[thresholds]\ntheta_crop = 1.5\n"), RangeError);
        CHECK_THROWS_AS(parse(kMinimal + "[thresholds]\ntheta_energy = -0.1\n"), RangeError);
        CHECK_THROWS_AS(parse(kMinimal + "[econ]\nepsilon = 0\n"), RangeError);
        CHECK_THROWS_AS(parse(kMinimal + "[scheme]\nmode = CT\nst_hours = 30\n"), RangeError);
        CHECK_THROWS_AS(parse(kMinimal + "[layout]\npitch = 1\n"), RangeError);
        CHECK_NOTHROW(parse(kMinimal + "[thresholds]\ntheta_crop = 0\n"));
    }

    TEST_CASE("unknown keys, sections and malformed values are schema errors") {
        CHECK_THROWS_AS(parse(kMinimal + "[layout]\ntilt = 3\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[foo]\nbar = 1\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[layout]\na_lm = 2\npitch = 4\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[layout]\na_lm = two\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[scheme]\nmode = ZZ\n"), SchemaError);
        CHECK_THROWS_AS(parse("[site]\nlatitude = 30\n"), SchemaError);  // no weather path
        CHECK_THROWS_AS(parse("[site\n"), SchemaError);
        CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), SchemaError);
    }

    TEST_CASE("M_L = 30 and A_LM = 6 survive a serialize/parse round trip") {
        auto s = parse(kMinimal + "[layout]\na_lm = 6\n[econ]\nM_L = 30\n");
        CHECK(s.econ.M_L == 30.0);
        CHECK(s.layout.a_lm() == doctest::Approx(6.0));
        const auto back = parse_scenario(serialize_scenario(s), "/elsewhere");
        CHECK(back == s);
    }

    TEST_CASE("every shipped scenario round trips") {
        for (const char* f : {"khanewal.ini", "khanewal_sweep.ini", "sydney.ini"}) {
            const auto s = load_scenario(test::source_dir() / "data/scenarios" / f);
            CHECK(parse_scenario(serialize_scenario(s), "/elsewhere") == s);
        }
    }

    TEST_CASE("custom crop entries") {
        const auto s = parse(kMinimal + R"(
[crops]
plan = custom
entry2 = Oct-Mar|garlic|7097.54|S
entry1 = Apr-Sep|fallow|0|
)");
        const auto plan = s.plan();
        REQUIRE(plan.entries.size() == 2);
        CHECK(plan.entries[0].fallow());
        CHECK(plan.entries[1].crop_name == "garlic");
        CHECK(plan.entries[1].revenue_cents == 709754);
        CHECK(plan.entries[1].response == "S");
        CHECK_THROWS_AS(parse(kMinimal + "[crops]\nplan = custom\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[crops]\nplan = custom\nentry1 = Jan-Dec|x|1\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[crops]\nplan = custom\nentry1 = Jan-Jun|x|1|T\n"), SchemaError);
    }

    TEST_CASE("built-in plans take the scenario response class") {
        const auto s = parse(kMinimal + "[crops]\nresponse = S\n");
        for (const auto& e : s.plan("LV").entries) CHECK(e.response == "S");
        CHECK_THROWS_AS(s.plan("XX"), SchemaError);
    }

    TEST_CASE("sweep axes, scheme labels and extra sites") {
        const auto s = parse(kMinimal + R"(
[sweep]
site = base, sydney
a_lm = 2, 4
scheme = ST, AT, NS_FIXED, CT(7.5)
delta_fit = 0, 10
crop_plan = LV, HV

[site:sydney]
latitude = -33.8688
longitude = 151.2093
weather_path = syd.csv
)");
        CHECK(s.sweep.cell_count() == 2 * 2 * 4 * 2 * 2);
        CHECK(s.sweep.scheme[3] == TrackingScheme::customized(7.5));
        CHECK(s.site_variant("sydney").site.utc_offset == 10.0);
        CHECK(s.site_variant("sydney").weather.path == "/data/base/syd.csv");
        CHECK_THROWS_AS(s.site_variant("nowhere"), SchemaError);

        CHECK(scheme_label(TrackingScheme::customized(7.5)) == "CT(7.5)");
        CHECK(scheme_label(TrackingScheme::ns_fixed()) == "NS_FIXED");
        CHECK(parse_scheme_label("CT(10)") == TrackingScheme::customized(10));
        CHECK_THROWS(parse_scheme_label("CT(x)"));
        CHECK_THROWS(parse_scheme_label("CT(30)"));
        CHECK_THROWS_AS(parse(kMinimal + "[sweep]\nsite = mars\n"), SchemaError);
        CHECK_THROWS_AS(parse(kMinimal + "[sweep]\na_lm = 2, 3\nmax_cells = 1\n"), RangeError);
    }

    TEST_CASE("enforcement and period parsing") {
        const auto s = parse(kMinimal + "[thresholds]\nenforcement = seasonal\nperiod = Nov-Feb\n");
        CHECK(s.thresholds.enforcement == Enforcement::Seasonal);
        CHECK(s.thresholds.period == MonthSet{10, 11, 0, 1});
        CHECK_THROWS(parse(kMinimal + "[thresholds]\nenforcement = weekly\n"));
        CHECK(parse(kMinimal + "[econ]\nhorizon_years = 25\n").econ.horizon_years == 25);
        CHECK_FALSE(parse(kMinimal + "[econ]\nhorizon_years = infinite\n").econ.horizon_years.has_value());
    }
}
