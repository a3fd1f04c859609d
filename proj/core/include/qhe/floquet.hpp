#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "qhe/cycle.hpp"

namespace qhe {

// Sideband weights of the frequency modulation. Entry q (|q| <= q_max) is the
// fraction of spectral weight at omega0 + q * base_freq. Negative and positive
// q are stored separately: for hybrid cycles the spectrum is not symmetric.
struct HarmonicDecomposition {
    double base_freq = 0.0;
    int q_max = 0;
    std::vector<double> weights;  // size 2 * q_max + 1, index q + q_max
    double tail_mass = 0.0;

    [[nodiscard]] double weight(int q) const;
    [[nodiscard]] double retained_mass() const;
    [[nodiscard]] double sideband_frequency(double omega0, int q) const { return omega0 + q * base_freq; }

    // Hand-built decomposition from (q, weight) lines; used for oracle tests
    // and for reduced models.
    static HarmonicDecomposition from_lines(double base_freq, const std::vector<std::pair<int, double>>& lines);
};

class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double tail) : std::runtime_error(what), tail_(tail) {}
    [[nodiscard]] double tail_mass() const noexcept { return tail_; }

private:
    double tail_;
};

// phi(t) = integral_0^t (omega(k, t') - omega0) dt', closed form.
[[nodiscard]] double phase_integral(const CycleSpec& spec, double t);

// Fourier weights of exp(-i phi(t)) over one coupling period, spacing delta_i.
// Throws TruncationError if more than tail_tolerance lies beyond q_max.
[[nodiscard]] HarmonicDecomposition harmonic_weights(const CycleSpec& spec, int q_max, int n_samples,
                                                     double tail_tolerance = 1e-6);

struct HarmonicOptions {
    int q_max = 64;
    int n_samples = 16384;
    double tail_tolerance = 1e-6;
    int max_samples = 1 << 22;
};

// harmonic_weights with q_max (and, if needed, n_samples) doubled until the
// tail tolerance is met.
[[nodiscard]] HarmonicDecomposition resolve_harmonics(const CycleSpec& spec, const HarmonicOptions& options = {});

}  // namespace qhe
