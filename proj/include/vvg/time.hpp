#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace vvg {

// Calendar date (proleptic Gregorian). Ordering is chronological.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    friend auto operator<=>(const Date&, const Date&) = default;

    // Days since 1970-01-01 (negative before the epoch).
    int day_number() const;
    static Date from_day_number(int days);

    // 0 = Sunday ... 6 = Saturday.
    int weekday() const;
    bool is_weekend() const;
    bool valid() const;

    // "YYYY-MM-DD"
    static std::optional<Date> parse(std::string_view text);
    std::string to_string() const;
};

// Wall-clock time as minutes since midnight.
struct TimeOfDay {
    int minutes = 0;

    friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;

    static constexpr TimeOfDay hm(int hour, int minute) { return {hour * 60 + minute}; }
    int hour() const { return minutes / 60; }
    int minute() const { return minutes % 60; }

    // "HH:MM"
    static std::optional<TimeOfDay> parse(std::string_view text);
    std::string to_string() const;
};

// Date plus time of day, interpreted as Eastern Time wall clock throughout.
struct Timestamp {
    Date date;
    TimeOfDay time;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

    // "YYYY-MM-DDTHH:MM" (space separator and an explicit ":00" seconds
    // field are also accepted on input).
    static std::optional<Timestamp> parse(std::string_view text);
    std::string to_string() const;
};

}  // namespace vvg
