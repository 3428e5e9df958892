#pragma once

#include <stdexcept>
#include <string>

namespace t3nls {

// Error taxonomy used across the library. All derive from std::runtime_error
// so callers may catch coarsely; the CLI maps them to exit codes.

struct truncation_mismatch : std::runtime_error {
    explicit truncation_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct weight_overflow : std::runtime_error {
    explicit weight_overflow(const std::string& what) : std::runtime_error(what) {}
};

struct blow_up_error : std::runtime_error {
    explicit blow_up_error(const std::string& what) : std::runtime_error(what) {}
};

struct no_contraction_error : std::runtime_error {
    explicit no_contraction_error(const std::string& what) : std::runtime_error(what) {}
};

struct invalid_parameters : std::runtime_error {
    explicit invalid_parameters(const std::string& what) : std::runtime_error(what) {}
};

struct zero_data_error : std::runtime_error {
    explicit zero_data_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace t3nls
