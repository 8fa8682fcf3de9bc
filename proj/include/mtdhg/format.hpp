#pragma once

#include <cstdio>
#include <string>

namespace mtdhg {

// Locale-independent, round-trippable-enough decimal used by every CSV and
// text output so that files are byte-identical across runs.
inline std::string format_double(double value, int significant = 10) {
  if (value == 0) value = 0;  // no "-0"
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant, value);
  return buffer;
}

inline const char* format_bool(bool value) { return value ? "true" : "false"; }

}  // namespace mtdhg
