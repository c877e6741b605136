#include "hdlcore/proc.hpp"

#include "hdlcore/errors.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hdlcore {

CommandResult run_command(const std::string& command, int timeout_ms) {
    int pipefd[2];
    if (pipe(pipefd) != 0) throw Error("pipe failed: " + std::string(strerror(errno)));

    pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        throw Error("fork failed: " + std::string(strerror(errno)));
    }

    if (pid == 0) {
        setpgid(0, 0); // own process group so a timeout kill reaches children
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    close(pipefd[1]);
    CommandResult result;

    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    bool open = true;
    while (open) {
        auto now = std::chrono::steady_clock::now();
        int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        if (wait_ms <= 0) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            break;
        }
        struct pollfd pfd = {pipefd[0], POLLIN, 0};
        int rc = poll(&pfd, 1, wait_ms);
        if (rc > 0) {
            char buf[4096];
            ssize_t n = read(pipefd[0], buf, sizeof(buf));
            if (n > 0)
                result.output.append(buf, static_cast<size_t>(n));
            else
                open = false; // EOF: the child closed its end
        } else if (rc == 0) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            break;
        } else if (errno != EINTR) {
            open = false;
        }
    }
    close(pipefd[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (result.timed_out) {
        result.exit_code = -1;
    } else if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

} // namespace hdlcore
