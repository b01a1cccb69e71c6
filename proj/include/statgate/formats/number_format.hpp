#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace statgate::formats {

inline bool is_integral_double(double x) {
  return std::isfinite(x) && std::nearbyint(x) == x && std::fabs(x) < 9.007199254740992e15;
}

// Display rendering: up to 7 significant digits, trailing zeros trimmed.
inline std::string format_number_print(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  char buf[64];
  if (is_integral_double(x)) {
    std::snprintf(buf, sizeof(buf), "%.0f", x);
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.7g", x);
  return buf;
}

// Shortest decimal text that parses back to exactly the same double;
// interchange formats use this so exports re-import losslessly.
inline std::string format_number_roundtrip(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  char buf[64];
  if (is_integral_double(x)) {
    std::snprintf(buf, sizeof(buf), "%.0f", x);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

// Number of digits after the decimal point in a plain (non-exponent)
// rendering; -1 when the text uses exponent notation.
inline int decimals_in(const std::string& s) {
  if (s.find('e') != std::string::npos || s.find('E') != std::string::npos) return -1;
  auto dot = s.find('.');
  if (dot == std::string::npos) return 0;
  return static_cast<int>(s.size() - dot - 1);
}

// Formats the finite elements of a vector with a common number of
// decimals, the way a console would align 1 and 3.5 as 1.0 and 3.5.
// Non-finite and missing elements are passed through as their names.
inline std::vector<std::string> format_number_column(const std::vector<double>& xs,
                                                     const std::vector<uint8_t>& na) {
  std::vector<std::string> out(xs.size());
  int max_dec = 0;
  bool any_exp = false;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (na[i]) {
      out[i] = "NA";
      continue;
    }
    out[i] = format_number_print(xs[i]);
    if (std::isfinite(xs[i])) {
      int d = decimals_in(out[i]);
      if (d < 0)
        any_exp = true;
      else if (d > max_dec)
        max_dec = d;
    }
  }
  if (any_exp || max_dec == 0) return out;
  char buf[64];
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!na[i] && std::isfinite(xs[i])) {
      std::snprintf(buf, sizeof(buf), "%.*f", max_dec, xs[i]);
      out[i] = buf;
    }
  }
  return out;
}

}  // namespace statgate::formats
