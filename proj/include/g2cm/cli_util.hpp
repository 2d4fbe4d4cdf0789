#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "g2cm/states.hpp"

namespace g2cm::cli {

// Full-consume double parse; leading '+' tolerated (std::from_chars rejects it).
inline bool parse_real(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc{} && res.ptr == e;
}

/**
 * Angle grammar: plain radians, or multiples of pi written as [sign][coef]pi[/divisor],
 * e.g. "pi", "-pi/4", "3pi/4", "0.5pi", "2pi/3".
 */
inline double parse_angle(std::string_view token) {
  double v = 0;
  if (parse_real(token, v)) return v;
  std::string_view s = token;
  double sign = 1;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    if (s.front() == '-') sign = -1;
    s.remove_prefix(1);
  }
  const std::size_t at = s.find("pi");
  if (at == std::string_view::npos)
    throw ValidationError("cannot parse angle '" + std::string(token) + "'");
  double coef = 1;
  if (at > 0 && !parse_real(s.substr(0, at), coef))
    throw ValidationError("cannot parse angle '" + std::string(token) + "'");
  const std::string_view rest = s.substr(at + 2);
  double div = 1;
  if (!rest.empty() &&
      (rest.front() != '/' || !parse_real(rest.substr(1), div) || div == 0))
    throw ValidationError("cannot parse angle '" + std::string(token) + "'");
  return sign * coef * M_PI / div;
}

struct SweepAxis {
  std::string name;
  double min{0};
  double max{0};
  int steps{0};

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
      v[static_cast<std::size_t>(i)] = min + (max - min) * double(i) / double(steps - 1);
    return v;
  }
};

// "name=min:max:steps"; min/max accept the angle grammar, steps must be an integer >= 2.
inline SweepAxis parse_sweep(std::string_view token) {
  const auto fail = [&]() -> ValidationError {
    return ValidationError("sweep must look like name=min:max:steps, got '" +
                           std::string(token) + "'");
  };
  const std::size_t eq = token.find('=');
  if (eq == std::string_view::npos || eq == 0) throw fail();
  SweepAxis ax;
  ax.name = std::string(token.substr(0, eq));
  const std::string_view rest = token.substr(eq + 1);
  const std::size_t c1 = rest.find(':');
  const std::size_t c2 = (c1 == std::string_view::npos) ? c1 : rest.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw fail();
  ax.min = parse_angle(rest.substr(0, c1));
  ax.max = parse_angle(rest.substr(c1 + 1, c2 - c1 - 1));
  double steps = 0;
  if (!parse_real(rest.substr(c2 + 1), steps) || steps != std::floor(steps)) throw fail();
  ax.steps = static_cast<int>(steps);
  if (ax.steps < 2) throw ValidationError("sweep needs at least 2 steps");
  if (!(ax.min < ax.max)) throw ValidationError("sweep needs min < max");
  return ax;
}

}  // namespace g2cm::cli
