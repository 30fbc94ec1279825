#pragma once

#include <stdexcept>
#include <string>

namespace loggas {

// Raised when an algorithm fails to produce a trustworthy number
// (non-convergence, singular systems, positivity loss).
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double diagnostic = 0.0)
        : std::runtime_error(what), diagnostic_(diagnostic) {}

    // Last residual or condition estimate, depending on the raiser.
    double diagnostic() const noexcept { return diagnostic_; }

private:
    double diagnostic_;
};

// Warnings go to stderr unless silenced (tests silence them).
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

} // namespace loggas
