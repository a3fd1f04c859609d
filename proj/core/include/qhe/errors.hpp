#pragma once

#include <stdexcept>
#include <string>

namespace qhe {

// Limit-cycle search ran out of cycles.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int cycles)
        : std::runtime_error(what), residual_(residual), cycles_(cycles) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] int cycles() const noexcept { return cycles_; }

private:
    double residual_;
    int cycles_;
};

// Time step too coarse: a population went measurably negative.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quantity has no meaning at this point of the cycle (decoupled baths,
// population inversion, 0/0 coupling factors).
class IllDefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace qhe
