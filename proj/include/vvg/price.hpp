#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vvg {

// Exact decimal price in index points at 1/10000-point resolution.
// Quarter-point ticks are represented exactly, so parsing and
// re-serializing a bar file is lossless. Statistics convert to double
// at the edges.
class Price {
public:
    static constexpr int64_t units_per_point = 10'000;

    constexpr Price() = default;

    static constexpr Price from_units(int64_t units) {
        Price p;
        p.units_ = units;
        return p;
    }

    // Nearest representable value; use for computed (non-parsed) prices.
    static Price from_points(double points);

    // Plain decimal literal with at most four fractional digits.
    static std::optional<Price> parse(std::string_view text);

    constexpr int64_t units() const { return units_; }
    double points() const { return static_cast<double>(units_) / units_per_point; }

    // Canonical form: no exponent, trailing fractional zeros trimmed.
    std::string to_string() const;

    friend constexpr auto operator<=>(const Price&, const Price&) = default;

    // Price difference in points.
    friend double operator-(Price a, Price b) {
        return static_cast<double>(a.units_ - b.units_) / units_per_point;
    }

private:
    int64_t units_ = 0;
};

}  // namespace vvg
