#pragma once

#include <stdexcept>
#include <string>

namespace hdlcore {

// Domain failure: bad input, bad config, corrupt file. The CLI maps this to exit 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Remote model endpoint failure. status is the HTTP status when one was received,
// 0 for transport-level failures.
class GatewayError : public Error {
public:
    explicit GatewayError(const std::string& what, int status = 0)
        : Error(what), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// Retries exhausted or per-request deadline exceeded.
class GatewayTimeout : public GatewayError {
public:
    explicit GatewayTimeout(const std::string& what) : GatewayError(what, 0) {}
};

} // namespace hdlcore
