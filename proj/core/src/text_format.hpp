#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace airylat::detail {

// Shortest round-trip decimal form; identical bits give identical text.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

inline std::string format_number(long v) { return std::to_string(v); }

}  // namespace airylat::detail
