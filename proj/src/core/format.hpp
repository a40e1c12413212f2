#pragma once

#include <cstdio>
#include <string>

namespace defog {

// Shortest-ish round-trippable decimal used by every CSV/trace writer so
// reports are byte-stable across runs.
inline std::string num9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace defog
