#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace usv {

// Shortest round-trip decimal form; keeps serialized files diffable.
inline std::string fmt_shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace usv
