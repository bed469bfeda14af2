#include "vvg/format.hpp"

#include <charconv>
#include <cstdio>

namespace vvg {

std::string fmt_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string fmt_shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string fmt_opt(const std::optional<double>& value) {
    return value ? fmt_shortest(*value) : std::string();
}

std::string fmt_opt_fixed(const std::optional<double>& value, int decimals) {
    return value ? fmt_fixed(*value, decimals) : std::string();
}

}  // namespace vvg
