#pragma once

#include "qhe/cycle.hpp"

namespace qhe {

// Two flat-band Markovian baths with disjoint spectral support. The cold band
// covers |omega| < separation_omega, the hot band |omega| > separation_omega;
// negative frequencies carry the KMS image of the positive band.
struct BathSpec {
    double t_cold = 1.0;
    double t_hot = 100.0;
    double g_cold = 1.0;
    double g_hot = 1.0;
    double separation_omega = 3.0;

    // Both bands at amplitude g0, separated at omega0.
    static BathSpec flat(double t_cold, double t_hot, double g0, double omega0);

    void validate() const;

    [[nodiscard]] double temperature(Bath b) const noexcept { return b == Bath::cold ? t_cold : t_hot; }
    [[nodiscard]] double amplitude(Bath b) const noexcept { return b == Bath::cold ? g_cold : g_hot; }
};

// Emission spectrum G_j(omega); negative omega gives exp(omega / T_j) G_j(|omega|).
[[nodiscard]] double spectral_response(const BathSpec& bath, Bath which, double omega);

// exp(-omega / T_j)
[[nodiscard]] double boltzmann_factor(const BathSpec& bath, Bath which, double omega);

}  // namespace qhe
