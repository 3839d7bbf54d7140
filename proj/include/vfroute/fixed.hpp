#pragma once

// Fixed-point scalar types and exact decimal parse/format helpers.
//
// Link delays are stored in units of 1e-6 ms (i.e. nanoseconds), capacities
// in kbit/s and scenario times in microseconds.  Every comparison made by the
// routers, the constraint checker and the exhaustive oracle is plain integer
// arithmetic, so optimality ties and bound checks are exact.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vfroute {

using DelayNs = std::int64_t;       // 1e-6 ms
using CapacityKbps = std::int64_t;  // 1e-3 Mbit/s
using TimeUs = std::int64_t;        // 1e-6 s

inline constexpr DelayNs kNsPerMs = 1'000'000;
inline constexpr CapacityKbps kKbpsPerMbps = 1'000;
inline constexpr TimeUs kUsPerS = 1'000'000;

// Distance sentinel for unreachable nodes.
inline constexpr DelayNs kUnreachable = std::numeric_limits<DelayNs>::max();

inline constexpr std::int64_t pow10_i64(int n) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

// Parses a decimal literal ("12", "-3.75") into an integer scaled by
// 10^frac_digits.  Fails on garbage, empty input, or more fractional digits
// than the scale can hold.
inline std::optional<std::int64_t> parse_scaled(std::string_view text, int frac_digits) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  std::int64_t integral = 0;
  bool any_digit = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    integral = integral * 10 + (text[i] - '0');
    any_digit = true;
  }
  std::int64_t frac = 0;
  int frac_seen = 0;
  if (i < text.size()) {  // consume '.'
    ++i;
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      if (frac_seen >= frac_digits) {
        if (text[i] != '0') return std::nullopt;  // precision loss
        continue;
      }
      frac = frac * 10 + (text[i] - '0');
      ++frac_seen;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  while (frac_seen < frac_digits) {
    frac *= 10;
    ++frac_seen;
  }
  std::int64_t value = integral * pow10_i64(frac_digits) + frac;
  return negative ? -value : value;
}

// Renders a scaled integer back to a decimal string, trimming trailing
// fractional zeros ("12.5", "24", "-0.125").
inline std::string format_scaled(std::int64_t value, int frac_digits) {
  const std::int64_t scale = pow10_i64(frac_digits);
  const bool negative = value < 0;
  // Avoid overflow on INT64_MIN by working with unsigned magnitude.
  std::uint64_t mag = negative ? 0ull - static_cast<std::uint64_t>(value)
                               : static_cast<std::uint64_t>(value);
  std::uint64_t integral = mag / static_cast<std::uint64_t>(scale);
  std::uint64_t frac = mag % static_cast<std::uint64_t>(scale);
  std::string out = negative ? "-" : "";
  out += std::to_string(integral);
  if (frac != 0) {
    std::string f = std::to_string(frac);
    f.insert(f.begin(), static_cast<std::size_t>(frac_digits) - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += '.';
    out += f;
  }
  return out;
}

// Converts a JSON-sourced double to the scaled integer representation.
// Exact for values with at most frac_digits decimal places in range.
inline std::int64_t from_double_scaled(double v, int frac_digits) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite numeric value");
  const double scaled = v * static_cast<double>(pow10_i64(frac_digits));
  if (std::abs(scaled) > 9.0e18) throw std::invalid_argument("numeric value out of range");
  return std::llround(scaled);
}

inline std::string format_ms(DelayNs ns) { return format_scaled(ns, 6); }
inline std::string format_mbps(CapacityKbps kbps) { return format_scaled(kbps, 3); }
inline std::string format_s(TimeUs us) { return format_scaled(us, 6); }

}  // namespace vfroute
