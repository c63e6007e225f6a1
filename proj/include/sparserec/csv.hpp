#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace sparserec {

/// Round-trip formatting for CSV cells; "nan"/"inf" spelled out, empty for missing.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string join_indices(const std::vector<int>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace sparserec
