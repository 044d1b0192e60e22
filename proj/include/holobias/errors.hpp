#pragma once

#include <stdexcept>
#include <string>

namespace holobias {

// Malformed input files / records (CLI exit code 2).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural invariant violated by otherwise well-formed data (CLI exit code 2).
struct constraint_error : std::runtime_error {
    explicit constraint_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation precondition not met, e.g. bias mode with fhat(0) != 0 (CLI exit code 3).
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric guard tripped: overflow guards, under-resolved grids (CLI exit code 4).
struct numeric_guard_error : std::runtime_error {
    explicit numeric_guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace holobias
