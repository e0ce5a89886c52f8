#include "ltcam/log.hpp"

#include <cstdlib>
#include <iostream>

namespace ltcam {

namespace {

LogLevel parse_level(const char* value) {
  if (value == nullptr) return LogLevel::kQuiet;
  const std::string v(value);
  if (v == "info" || v == "1") return LogLevel::kInfo;
  if (v == "debug" || v == "2") return LogLevel::kDebug;
  return LogLevel::kQuiet;
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level(std::getenv("LTCAM_LOG"));
  return level;
}

void log_line(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) <= static_cast<int>(log_level()) && level != LogLevel::kQuiet) {
    std::cerr << message << '\n';
  }
}

}  // namespace ltcam
