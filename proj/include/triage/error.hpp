#pragma once

#include <stdexcept>
#include <string>

namespace triage {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
    usage,   // bad flags, bad configuration values
    io,      // missing or unwritable files
    format,  // corrupt or unsupported artifacts
    data,    // input that violates a documented precondition
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace triage
