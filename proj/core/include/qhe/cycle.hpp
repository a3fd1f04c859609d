#pragma once

#include <cmath>
#include <limits>

namespace qhe {

enum class Bath { cold, hot };

inline const char* to_string(Bath b) noexcept { return b == Bath::cold ? "cold" : "hot"; }

// Smoothness values at or above this are treated as the stroke (Otto) limit.
inline constexpr double kOttoSmoothness = 1e6;

// Cycle-form parameters. Frequencies are angular; k is dimensionless and may
// be +infinity for the exact stroke limit.
struct CycleSpec {
    double k = 0.0;
    double delta_m = 1.0;
    double lambda = 0.1;
    double omega0 = 3.0;
    double omega1 = 1.0;
    double omega2 = 5.0;
    int n1 = 100;
    int n2 = 1;

    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    [[nodiscard]] int phi() const;
    [[nodiscard]] double tau_m() const;
    [[nodiscard]] double tau_i() const;
    // Coupling modulation rate 2*pi/tau_i; also the harmonic spacing.
    [[nodiscard]] double delta_i() const;

    // Prefactors e^{-k} and e^{-1/k} of the sinusoidal and trapezoidal parts,
    // taken at their limit values for k = 0 and k = infinity.
    [[nodiscard]] double continuous_weight() const;
    [[nodiscard]] double otto_weight() const;

    // Time reduced into [0, tau_i).
    [[nodiscard]] double reduce(double t) const;
};

// Integer ratio tau_i / tau_m: round((k + n1) / (k + n2)), at least 1.
[[nodiscard]] int phi(const CycleSpec& spec);

// Trapezoidal stroke profile omega_otto(t) measured from omega0.
[[nodiscard]] double otto_profile(const CycleSpec& spec, double t);

// Instantaneous level spacing omega(k, t).
[[nodiscard]] double omega(const CycleSpec& spec, double t);

// Trapezoidal coupling window in [0, 1] evaluated at the cycle fraction x.
// Cold: plateau on [1/4, 1/2], hot: plateau on [3/4, 1], edges 1/8 wide.
[[nodiscard]] double coupling_window(Bath bath, double x);

// f_j(k, t) = exp(-k (1 - window_j(t))).
[[nodiscard]] double coupling(const CycleSpec& spec, Bath bath, double t);

// max over one coupling period of |omega(k, t) - omega0|.
[[nodiscard]] double max_modulation_amplitude(const CycleSpec& spec);

}  // namespace qhe
