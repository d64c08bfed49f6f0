#pragma once

#include <bitset>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace agripv {

/// Set of calendar months, bit i = month index i (0 = January).
class MonthSet {
public:
    constexpr MonthSet() = default;
    MonthSet(std::initializer_list<int> months);

    static MonthSet all();
    /// Inclusive, wrapping range: range(9, 2) is Oct..Mar.
    static MonthSet range(int first, int last);
    /// Parses "Apr-Sep", "Oct-Mar", "Jan", or a comma list "Jan,Feb".
    static MonthSet parse(std::string_view text);

    bool contains(int month) const { return bits_.test(static_cast<std::size_t>(month)); }
    void insert(int month) { bits_.set(static_cast<std::size_t>(month)); }
    bool empty() const { return bits_.none(); }
    std::size_t size() const { return bits_.count(); }
    bool intersects(const MonthSet& other) const { return (bits_ & other.bits_).any(); }
    MonthSet operator|(const MonthSet& other) const;
    std::vector<int> months() const;
    std::string to_string() const;

    friend bool operator==(const MonthSet&, const MonthSet&) = default;

private:
    std::bitset<12> bits_;
};

std::string_view month_abbrev(int month);

/// One rotation slot. Revenues are held in integer cents so that plan totals
/// reproduce the published decimal figures exactly.
struct CropEntry {
    MonthSet months;
    std::string crop_name;
    std::int64_t revenue_cents = 0;  // $/ha per season, full sun
    std::string response;            // shade-response curve key; empty when fallow

    bool fallow() const { return response.empty(); }
    double revenue_full_sun() const { return static_cast<double>(revenue_cents) / 100.0; }

    friend bool operator==(const CropEntry&, const CropEntry&) = default;
};

struct CropPlan {
    std::string name;
    std::vector<CropEntry> entries;

    /// Months disjoint, all twelve covered (fallow entries count), revenues >= 0.
    void validate() const;
    std::int64_t total_revenue_cents() const;
    double total_revenue() const { return static_cast<double>(total_revenue_cents()) / 100.0; }
    /// Copy with every non-fallow entry mapped to the given curve key.
    CropPlan with_response(const std::string& response) const;

    friend bool operator==(const CropPlan&, const CropPlan&) = default;
};

/// Low-value (cotton/wheat) and high-value (tomato/cauliflower/garlic)
/// rotations for Khanewal; all crops use the shade-tolerant curve "T".
std::vector<CropPlan> builtin_crop_tables();

/// Looks up "LV" or "HV" (case-sensitive). Throws SchemaError otherwise.
CropPlan builtin_crop_plan(std::string_view name);

}  // namespace agripv
