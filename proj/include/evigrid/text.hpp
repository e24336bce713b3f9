#pragma once

#include <cstdio>
#include <string>

namespace evigrid {

// Round-trip-exact decimal form of a double, for CSV output that must be
// byte-stable across platforms.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace evigrid
