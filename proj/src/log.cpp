#include "hdlcore/log.hpp"

#include "hdlcore/errors.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hdlcore {

namespace {

std::atomic<LogLevel> g_level{LogLevel::Info};
std::mutex g_mutex;

const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "info";
}

} // namespace

void set_log_level(LogLevel level) { g_level.store(level); }

void set_log_level(const std::string& name) {
    if (name == "error") set_log_level(LogLevel::Error);
    else if (name == "warn") set_log_level(LogLevel::Warn);
    else if (name == "info") set_log_level(LogLevel::Info);
    else if (name == "debug") set_log_level(LogLevel::Debug);
    else throw Error("unknown log level: " + name + " (expected error|warn|info|debug)");
}

LogLevel log_level() { return g_level.load(); }

void log(LogLevel level, const std::string& message) {
    if (level > g_level.load()) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "[" << level_name(level) << "] " << message << "\n";
}

} // namespace hdlcore
