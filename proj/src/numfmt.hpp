#pragma once

#include <charconv>
#include <string>

namespace cstrip {

// Shortest decimal that round-trips; keeps CSV output byte-stable.
inline std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace cstrip
