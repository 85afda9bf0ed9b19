#pragma once
// Shortest round-trip decimal formatting for CSV emission. Bit-exact
// reproducibility claims need lossless float serialization.

#include <charconv>
#include <string>

namespace onoff {

inline std::string fmt_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace onoff
