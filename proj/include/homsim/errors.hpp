#pragma once

#include <stdexcept>
#include <string>

namespace homsim {

// Error taxonomy mirrors the CLI exit codes: config/validation problems
// (exit 2), computation failures (exit 3), and I/O failures (exit 4).

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ComputeError : std::runtime_error {
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Out-of-validity-range request (e.g. wavelength outside a dispersion
// data set). Message names the valid range.
struct RangeError : ComputeError {
    explicit RangeError(const std::string& what) : ComputeError(what) {}
};

}  // namespace homsim
