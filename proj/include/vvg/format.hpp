#pragma once

#include <optional>
#include <string>

namespace vvg {

// Fixed-precision decimal (snprintf %.*f).
std::string fmt_fixed(double value, int decimals);

// Shortest round-trip decimal form; deterministic across platforms.
std::string fmt_shortest(double value);

// Absent values render as the empty string (CSV convention).
std::string fmt_opt(const std::optional<double>& value);
std::string fmt_opt_fixed(const std::optional<double>& value, int decimals);

}  // namespace vvg
