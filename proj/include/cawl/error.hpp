#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cawl {

// Base error for the whole library. Every throw site names the subsystem it
// belongs to so callers (and the CLI) can report where a failure originated.
class Error : public std::runtime_error {
public:
    Error(std::string subsystem, const std::string& message)
        : std::runtime_error("[" + subsystem + "] " + message),
          subsystem_(std::move(subsystem)) {}

    const std::string& subsystem() const noexcept { return subsystem_; }

private:
    std::string subsystem_;
};

// Caller passed an invalid argument (bad dimensions, out-of-range level, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Input data does not have the shape the format requires.
class MalformedInputError : public Error {
public:
    using Error::Error;
};

// Sample value outside the legal range for the requested operation.
class RangeError : public Error {
public:
    using Error::Error;
};

// A coded stream cannot be decoded (truncated or corrupt).
class DecodeError : public Error {
public:
    using Error::Error;
};

// Internal consistency violation; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace cawl
