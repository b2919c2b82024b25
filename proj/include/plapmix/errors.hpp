#pragma once

#include <stdexcept>
#include <string>

namespace plapmix {

// Invalid geometry, kernel, or config input.
struct invalid_input : std::invalid_argument {
    explicit invalid_input(const std::string& msg) : std::invalid_argument(msg) {}
};

// Grid spacing too coarse for the requested kernel radius or domain.
struct resolution_error : std::invalid_argument {
    explicit resolution_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Quotient of an identically-zero field, division by a vanishing norm, etc.
struct undefined_quotient : std::domain_error {
    explicit undefined_quotient(const std::string& msg) : std::domain_error(msg) {}
};

} // namespace plapmix
