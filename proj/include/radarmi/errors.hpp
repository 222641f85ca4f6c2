#pragma once

#include <stdexcept>
#include <string>

namespace radarmi {

/// Numerical failure: non-convergence, singular operand, non-finite result.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad scenario file, inconsistent sweep configuration, or CLI misuse.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace radarmi
