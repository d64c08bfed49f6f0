#include "agripv/civil_time.hpp"

#include <charconv>

#include <fmt/core.h>

#include "agripv/error.hpp"

namespace agripv {

using namespace std::chrono;

CivilTime make_civil(int year, unsigned month, unsigned day, int hour, int minute, int second) {
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                             std::chrono::day{day}};
    if (!ymd.ok())
        throw ParseError(fmt::format("invalid calendar date {}-{}-{}", year, month, day));
    return local_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

namespace {

int take_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
    int value = 0;
    if (pos + len > text.size())
        throw ParseError(fmt::format("truncated timestamp '{}'", whole));
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len)
        throw ParseError(fmt::format("malformed timestamp '{}'", whole));
    return value;
}

void expect(std::string_view text, std::size_t pos, std::string_view chars, std::string_view whole) {
    if (pos >= text.size() || chars.find(text[pos]) == std::string_view::npos)
        throw ParseError(fmt::format("malformed timestamp '{}'", whole));
}

}  // namespace

CivilTime parse_iso8601(std::string_view text) {
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);

    const int y = take_int(text, 0, 4, text);
    expect(text, 4, "-", text);
    const int mo = take_int(text, 5, 2, text);
    expect(text, 7, "-", text);
    const int d = take_int(text, 8, 2, text);
    expect(text, 10, "T ", text);
    const int h = take_int(text, 11, 2, text);
    expect(text, 13, ":", text);
    const int mi = take_int(text, 14, 2, text);
    int s = 0;
    if (text.size() > 16) {
        expect(text, 16, ":", text);
        s = take_int(text, 17, 2, text);
        if (text.size() != 19) throw ParseError(fmt::format("malformed timestamp '{}'", text));
    }
    if (mo < 1 || mo > 12 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59)
        throw ParseError(fmt::format("timestamp field out of range '{}'", text));
    return make_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), h, mi, s);
}

std::string format_iso8601(CivilTime t) {
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

year_month_day civil_ymd(CivilTime t) { return year_month_day{floor<days>(t)}; }

int month_index(CivilTime t) { return static_cast<int>(static_cast<unsigned>(civil_ymd(t).month())) - 1; }

int day_of_year(CivilTime t) {
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const local_days jan1{ymd.year() / January / 1};
    return static_cast<int>((day - jan1).count()) + 1;
}

double hour_of_day(CivilTime t) {
    const auto day = floor<days>(t);
    return duration<double, std::ratio<3600>>(t - day).count();
}

}  // namespace agripv
