#include "vvg/time.hpp"

#include <charconv>
#include <cstdio>

namespace vvg {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

int Date::day_number() const {
    // Howard Hinnant's days-from-civil algorithm.
    int y = year;
    const unsigned m = static_cast<unsigned>(month);
    const unsigned d = static_cast<unsigned>(day);
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

Date Date::from_day_number(int days) {
    int z = days + 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday.
    const int dn = day_number();
    return ((dn % 7) + 7 + 4) % 7;
}

bool Date::is_weekend() const {
    const int wd = weekday();
    return wd == 0 || wd == 6;
}

bool Date::valid() const {
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    return from_day_number(day_number()) == *this;
}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    Date d;
    if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day)) {
        return std::nullopt;
    }
    if (!d.valid()) return std::nullopt;
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<TimeOfDay> TimeOfDay::parse(std::string_view text) {
    if (text.size() != 5 || text[2] != ':') return std::nullopt;
    int h = 0;
    int m = 0;
    if (!parse_int(text.substr(0, 2), h) || !parse_int(text.substr(3, 2), m)) return std::nullopt;
    if (h < 0 || h > 23 || m < 0 || m > 59) return std::nullopt;
    return TimeOfDay::hm(h, m);
}

std::string TimeOfDay::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", hour(), minute());
    return buf;
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
    if (text.size() < 16) return std::nullopt;
    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    const auto date = Date::parse(text.substr(0, 10));
    const auto time = TimeOfDay::parse(text.substr(11, 5));
    if (!date || !time) return std::nullopt;
    if (text.size() > 16) {
        // Only a zero seconds field is meaningful for 5-minute bars.
        if (text.substr(16) != ":00") return std::nullopt;
    }
    return Timestamp{*date, *time};
}

std::string Timestamp::to_string() const {
    return date.to_string() + "T" + time.to_string();
}

}  // namespace vvg
