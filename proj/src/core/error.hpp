#pragma once

#include <stdexcept>
#include <string>

namespace neurokey {

enum class ErrorCode {
    InvalidArgument = 1,
    Dimension       = 2,
    Validation      = 3,
    Encoding        = 4,
    Protocol        = 5,
    Framing         = 6,
    Oversize        = 7,
    Timeout         = 8,
    Network         = 9,
    Io              = 10,
    Internal        = 11,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace neurokey
