#pragma once

#include <stdexcept>
#include <string>

namespace geocluster {

// Thrown when an estimator arm is empty for the realized assignment.
// The Monte Carlo layer catches these, counts them, and drops the draw;
// the CLI maps them to exit code 3. Never folded into a silent NaN.
class DegenerateDraw : public std::runtime_error {
public:
    // arm: 1 for the treated/exposed arm, 0 for the control arm
    DegenerateDraw(int arm, const std::string& what_arg)
        : std::runtime_error(what_arg), arm_(arm) {}
    int arm() const noexcept { return arm_; }

private:
    int arm_;
};

} // namespace geocluster
