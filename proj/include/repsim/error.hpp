#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace repsim {

/// Category of a failure, printed by the CLI as the `error_kind` prefix.
enum class ErrorKind {
    validation,  // malformed or inconsistent input data
    parameter,   // argument out of its admissible range
    degenerate,  // input is valid but the quantity is undefined on it
    io,          // file missing, unreadable, or corrupt
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::validation: return "validation_error";
    case ErrorKind::parameter: return "parameter_error";
    case ErrorKind::degenerate: return "degenerate_input";
    case ErrorKind::io: return "io_error";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace repsim
