#pragma once

#include <stdexcept>
#include <string>

namespace tokeval {

// Problems with input data or files. The CLI maps these to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Misuse of the toolkit surface (conflicting options, bad parameter values).
// The CLI maps these to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tokeval
