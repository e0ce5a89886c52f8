#pragma once

#include <string>

namespace ltcam {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

/// Verbosity from the LTCAM_LOG environment variable (quiet, info, debug or
/// 0..2). Read once; defaults to quiet.
LogLevel log_level();

/// Writes one line to stderr when `level` is enabled.
void log_line(LogLevel level, const std::string& message);

}  // namespace ltcam
