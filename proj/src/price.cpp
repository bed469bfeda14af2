#include "vvg/price.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace vvg {

Price Price::from_points(double points) {
    return from_units(std::llround(points * units_per_point));
}

std::optional<Price> Price::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        i = 1;
    }
    constexpr int64_t whole_limit = std::numeric_limits<int64_t>::max() / units_per_point - 1;
    int64_t whole = 0;
    bool any_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (whole > whole_limit / 10) return std::nullopt;
        whole = whole * 10 + (text[i] - '0');
        any_digit = true;
        ++i;
    }
    if (!any_digit) return std::nullopt;
    int64_t frac = 0;
    int frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (frac_digits == 4) return std::nullopt;  // finer than tick resolution
            frac = frac * 10 + (text[i] - '0');
            ++frac_digits;
            ++i;
        }
        if (frac_digits == 0) return std::nullopt;
    }
    if (i != text.size()) return std::nullopt;
    for (; frac_digits < 4; ++frac_digits) frac *= 10;
    int64_t units = whole * units_per_point + frac;
    if (negative) units = -units;
    return from_units(units);
}

std::string Price::to_string() const {
    int64_t u = units_;
    std::string out;
    if (u < 0) {
        out += '-';
        u = -u;
    }
    out += std::to_string(u / units_per_point);
    int64_t frac = u % units_per_point;
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%04lld", static_cast<long long>(frac));
        std::string digits = buf;
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

}  // namespace vvg
