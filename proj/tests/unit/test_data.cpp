#include <doctest.h>

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "agripv/civil_time.hpp"
#include "agripv/crops.hpp"
#include "agripv/error.hpp"
#include "agripv/synthetic.hpp"
#include "agripv/weather.hpp"
#include "support.hpp"

using namespace agripv;

namespace {

std::string hourly_csv(int rows, int bad_row = -1, double bad_dni = 0.0) {
    std::string text = "timestamp,ghi,dni,dhi\n";
    CivilTime t = make_civil(2021, 1, 1);
    for (int i = 0; i < rows; ++i, t += std::chrono::hours{1}) {
        const double dni = i == bad_row ? bad_dni : 0.0;
        text += format_iso8601(t) + ",0," + std::to_string(dni) + ",0\n";
    }
    return text;
}

}  // namespace

TEST_SUITE("civil") {
    TEST_CASE("ISO timestamps round trip") {
        for (const char* s : {"2021-01-01T00:00:00", "2021-06-21T12:30:15", "2020-02-29T23:59:59"})
            CHECK(format_iso8601(parse_iso8601(s)) == s);
        CHECK(format_iso8601(parse_iso8601("2021-03-04 05:06")) == "2021-03-04T05:06:00");
    }

    TEST_CASE("malformed timestamps are parse errors") {
        for (const char* s : {"", "2021-13-01T00:00", "2021-02-30T00:00", "2021/01/01T00:00", "2021-01-01T25:00"})
            CHECK_THROWS_AS(parse_iso8601(s), ParseError);
    }

    TEST_CASE("calendar helpers") {
        const auto t = make_civil(2021, 3, 1, 6, 30);
        CHECK(month_index(t) == 2);
        CHECK(day_of_year(t) == 60);
        CHECK(hour_of_day(t) == doctest::Approx(6.5));
    }
}

TEST_SUITE("weather") {
    TEST_CASE("a full hourly year parses to 8760 records") {
        const auto s = parse_weather_csv(hourly_csv(8760), SiteConfig{});
        CHECK(s.records.size() == kHoursPerYear);
    }

    TEST_CASE("negative DNI names the offending record") {
        try {
            parse_weather_csv(hourly_csv(8760, 4000, -5.0), SiteConfig{});
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.record() == 4000);
        }
    }

    TEST_CASE("gaps, duplicates, short years and non-hourly cadence are rejected") {
        WeatherSeries s = parse_weather_csv(hourly_csv(8760), SiteConfig{});
        auto gap = s;
        gap.records.erase(gap.records.begin() + 100);
        CHECK_THROWS_AS(validate_weather(gap), ValidationError);

        auto dup = s;
        dup.records[10].time = dup.records[9].time;
        CHECK_THROWS_AS(validate_weather(dup), ValidationError);

        auto half = s;
        half.records[10].time -= std::chrono::minutes{30};
        CHECK_THROWS_AS(validate_weather(half), UnitError);

        auto short_year = s;
        short_year.records.resize(8000);
        CHECK_THROWS_AS(validate_weather(short_year), ValidationError);

        auto inconsistent = s;
        inconsistent.records[5].ghi = 100.0;
        CHECK_THROWS_AS(validate_weather(inconsistent), ValidationError);
    }

    TEST_CASE("CSV header and field errors are parse errors") {
        CHECK_THROWS_AS(parse_weather_csv("", SiteConfig{}), ParseError);
        CHECK_THROWS_AS(parse_weather_csv("time,a,b,c\n", SiteConfig{}), ParseError);
        CHECK_THROWS_AS(parse_weather_csv("timestamp,ghi,dni,dhi\n2021-01-01T00:00,x,0,0\n", SiteConfig{}),
                        ParseError);
        CHECK_THROWS_AS(load_weather("/nonexistent/weather.csv", WeatherFormat::Csv, SiteConfig{}), ParseError);
    }

    TEST_CASE("synthetic year survives a CSV round trip") {
        const auto& w = *test::khanewal_weather();
        const auto back = parse_weather_csv(weather_to_csv(w), w.site);
        REQUIRE(back.records.size() == w.records.size());
        auto ghi_sum = [](const WeatherSeries& s) {
            return std::accumulate(s.records.begin(), s.records.end(), 0.0,
                                   [](double a, const WeatherRecord& r) { return a + r.ghi; });
        };
        CHECK(std::abs(ghi_sum(back) - ghi_sum(w)) / ghi_sum(w) <= 1e-9);
        CHECK(back.records.front().time == w.records.front().time);
        CHECK(back.records.back().time == w.records.back().time);
    }

    TEST_CASE("shipped weather files load and validate") {
        for (const char* f : {"khanewal_synthetic.csv", "sydney_synthetic.csv"}) {
            const auto s = load_weather(test::source_dir() / "data/weather" / f, WeatherFormat::Csv, SiteConfig{});
            CHECK(s.records.size() == kHoursPerYear);
        }
    }

    TEST_CASE("EPW rows map hour-ending stamps onto one year") {
        std::string text;
        for (int i = 0; i < 8; ++i) text += "HEADER\n";
        CivilTime t = make_civil(2021, 1, 1);
        for (std::size_t i = 0; i < kHoursPerYear; ++i, t += std::chrono::hours{1}) {
            const auto ymd = civil_ymd(t);
            const unsigned month = static_cast<unsigned>(ymd.month());
            // TMY splice: the year column changes from month to month.
            const int year = i == 0 ? 2021 : 1990 + static_cast<int>(month);
            text += fmt::format("{},{},{},{},0,x,x,x,x,x,x,x,x,{},{},{},x\n", year, month,
                                static_cast<unsigned>(ymd.day()), static_cast<int>(hour_of_day(t)) + 1,
                                i % 24 == 12 ? 500 : 0, i % 24 == 12 ? 400 : 0, i % 24 == 12 ? 150 : 0);
        }
        const auto s = parse_weather_epw(text, SiteConfig{});
        REQUIRE(s.records.size() == kHoursPerYear);
        CHECK(s.records.front().time == make_civil(2021, 1, 1, 0));
        CHECK(s.records.back().time == make_civil(2021, 12, 31, 23));
        CHECK(s.records[12].ghi == 500.0);
        CHECK(s.records[12].dni == 400.0);
        CHECK(s.records[12].dhi == 150.0);
    }

    TEST_CASE("site validation") {
        SiteConfig s;
        s.latitude = 91;
        CHECK_THROWS_AS(s.validate(), RangeError);
        s = SiteConfig{};
        s.albedo = 1.5;
        CHECK_THROWS_AS(s.validate(), RangeError);
        CHECK_THROWS_AS(parse_weather_format("tmy"), SchemaError);
    }
}

TEST_SUITE("crops") {
    TEST_CASE("built-in plan totals are exact") {
        CHECK(builtin_crop_plan("LV").total_revenue_cents() == 29831);
        // The published HV line items sum to 9192.33; the printed total is 9192.34.
        CHECK(builtin_crop_plan("HV").total_revenue_cents() == 94881 + 114598 + 709754);
        CHECK(std::abs(builtin_crop_plan("HV").total_revenue() - 9192.34) <= 0.01 + 1e-9);
        CHECK_THROWS_AS(builtin_crop_plan("lv"), SchemaError);
        for (const auto& p : builtin_crop_tables()) CHECK_NOTHROW(p.validate());
    }

    TEST_CASE("month sets parse ranges, wraps and lists") {
        CHECK(MonthSet::parse("Oct-Mar") == MonthSet{9, 10, 11, 0, 1, 2});
        CHECK(MonthSet::parse("Apr-Sep").size() == 6);
        CHECK(MonthSet::parse("Jan,Feb") == MonthSet{0, 1});
        CHECK(MonthSet::parse("Jan-Dec") == MonthSet::all());
        CHECK(MonthSet::parse("Nov-Feb").to_string() == "Jan,Feb,Nov,Dec");
        CHECK_THROWS_AS(MonthSet::parse("Foo"), SchemaError);
    }

    TEST_CASE("plan validation rejects overlaps and gaps") {
        CropPlan p = builtin_crop_plan("LV");
        p.entries[1].months = MonthSet::parse("Sep-Mar");
        CHECK_THROWS_AS(p.validate(), SchemaError);
        p = builtin_crop_plan("LV");
        p.entries[1].months = MonthSet::parse("Oct-Feb");
        CHECK_THROWS_AS(p.validate(), SchemaError);
        p = builtin_crop_plan("LV");
        p.entries[0].revenue_cents = -1;
        CHECK_THROWS_AS(p.validate(), RangeError);
    }

    TEST_CASE("with_response remaps every cropped entry") {
        const auto p = builtin_crop_plan("HV").with_response("S");
        for (const auto& e : p.entries) CHECK(e.response == "S");
    }
}
