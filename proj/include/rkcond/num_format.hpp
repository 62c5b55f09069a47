#pragma once

#include <charconv>
#include <string>

namespace rkcond {

/// Shortest decimal string that round-trips to the same double.
inline std::string shortest_repr(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace rkcond
