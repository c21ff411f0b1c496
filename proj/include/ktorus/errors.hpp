#pragma once

#include <stdexcept>
#include <string>

namespace ktorus {

/// Invalid parameters or malformed configuration (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditioning failures and unattainable tolerances (CLI exit code 3).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Enumeration or allocation beyond the documented budget (CLI exit code 4).
struct size_budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ktorus
