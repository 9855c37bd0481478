#pragma once

#include "sloshing/acceptance.hpp"

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <string>

namespace sloshing::acceptance::detail {

inline std::string printf_string(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Relative gap below which a strict inequality cannot be resolved in double.
inline constexpr double kResolution = 4.0 * 2.220446049250313e-16;

}  // namespace sloshing::acceptance::detail
