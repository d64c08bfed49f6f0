#include "agripv/crops.hpp"

#include <array>

#include <fmt/core.h>

#include "agripv/error.hpp"

namespace agripv {

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int parse_month(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    for (std::size_t i = 0; i < kMonthNames.size(); ++i)
        if (s == kMonthNames[i]) return static_cast<int>(i);
    throw SchemaError(fmt::format("unknown month '{}'", s));
}

}  // namespace

MonthSet::MonthSet(std::initializer_list<int> months) {
    for (int m : months) insert(m);
}

MonthSet MonthSet::all() {
    MonthSet s;
    s.bits_.set();
    return s;
}

MonthSet MonthSet::range(int first, int last) {
    MonthSet s;
    for (int m = first;; m = (m + 1) % 12) {
        s.insert(m);
        if (m == last) break;
    }
    return s;
}

MonthSet MonthSet::parse(std::string_view text) {
    MonthSet out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto item = text.substr(start, end - start);
        const auto dash = item.find('-');
        if (dash == std::string_view::npos) {
            out.insert(parse_month(item));
        } else {
            out = out | range(parse_month(item.substr(0, dash)), parse_month(item.substr(dash + 1)));
        }
        start = end + 1;
    }
    return out;
}

MonthSet MonthSet::operator|(const MonthSet& other) const {
    MonthSet s;
    s.bits_ = bits_ | other.bits_;
    return s;
}

std::vector<int> MonthSet::months() const {
    std::vector<int> out;
    for (int m = 0; m < 12; ++m)
        if (contains(m)) out.push_back(m);
    return out;
}

std::string MonthSet::to_string() const {
    std::string out;
    for (int m : months()) {
        if (!out.empty()) out += ',';
        out += kMonthNames[static_cast<std::size_t>(m)];
    }
    return out;
}

std::string_view month_abbrev(int month) { return kMonthNames.at(static_cast<std::size_t>(month)); }

void CropPlan::validate() const {
    MonthSet covered;
    for (const auto& e : entries) {
        if (e.months.empty())
            throw SchemaError(fmt::format("crop plan '{}': entry '{}' has no months", name,
                                          e.crop_name));
        if (covered.intersects(e.months))
            throw SchemaError(fmt::format("crop plan '{}': entry '{}' overlaps earlier months",
                                          name, e.crop_name));
        if (e.revenue_cents < 0)
            throw RangeError(fmt::format("crop plan '{}': entry '{}' has negative revenue", name,
                                         e.crop_name));
        if (e.fallow() && e.revenue_cents != 0)
            throw SchemaError(fmt::format("crop plan '{}': fallow entry '{}' carries revenue",
                                          name, e.crop_name));
        covered = covered | e.months;
    }
    if (covered != MonthSet::all())
        throw SchemaError(fmt::format(
            "crop plan '{}': months not covered; list them as an explicit fallow entry", name));
}

std::int64_t CropPlan::total_revenue_cents() const {
    std::int64_t total = 0;
    for (const auto& e : entries) total += e.revenue_cents;
    return total;
}

CropPlan CropPlan::with_response(const std::string& response) const {
    CropPlan out = *this;
    for (auto& e : out.entries)
        if (!e.fallow()) e.response = response;
    return out;
}

std::vector<CropPlan> builtin_crop_tables() {
    // 2018 net revenues for Khanewal, $/ha per season.
    CropPlan lv{"LV",
                {{MonthSet::range(3, 8), "Cotton", 6988, "T"},
                 {MonthSet::range(9, 2), "Wheat", 22843, "T"}}};
    CropPlan hv{"HV",
                {{MonthSet::range(3, 5), "Tomato", 94881, "T"},
                 {MonthSet::range(6, 8), "Cauliflower", 114598, "T"},
                 {MonthSet::range(9, 2), "Garlic", 709754, "T"}}};
    return {lv, hv};
}

CropPlan builtin_crop_plan(std::string_view name) {
    for (auto& plan : builtin_crop_tables())
        if (plan.name == name) return plan;
    throw SchemaError(fmt::format("unknown built-in crop plan '{}' (expected LV or HV)", name));
}

}  // namespace agripv
