#pragma once

#include <string>

namespace hdlcore {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

void set_log_level(LogLevel level);
void set_log_level(const std::string& name); // error|warn|info|debug
LogLevel log_level();

// Writes "[level] message" to stderr when `level` is enabled.
void log(LogLevel level, const std::string& message);

} // namespace hdlcore
