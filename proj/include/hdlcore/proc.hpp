#pragma once

#include <string>

namespace hdlcore {

struct CommandResult {
    int exit_code = -1;   // 128+signal when killed; 127 when the command is missing
    bool timed_out = false;
    std::string output;   // combined stdout+stderr
};

// Runs `command` through /bin/sh -c with a wall-clock deadline. The whole process
// group is killed on timeout. Never throws for command failures.
CommandResult run_command(const std::string& command, int timeout_ms);

} // namespace hdlcore
