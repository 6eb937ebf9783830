#pragma once

#include <stdexcept>

namespace hv {

/// Numerical failure (solver non-convergence, censoring past threshold, ...);
/// distinguished from validation errors for the CLI exit code.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hv
