#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "qhe/baths.hpp"
#include "qhe/cycle.hpp"
#include "qhe/errors.hpp"
#include "qhe/floquet.hpp"

namespace qhe {

// Both couplings below this amplitude count as "decoupled from the baths".
inline constexpr double kVanishingCoupling = 1e-6;

// Populations of the truncated ladder n = 0..n_max.
struct LadderState {
    std::vector<double> populations;
    // Optional non-equidistant spacings; entry n - 1 is the gap between levels
    // n - 1 and n. Empty means every gap is omega0.
    std::vector<double> level_spacings;
    double time = 0.0;

    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(populations.size()) - 1; }
    [[nodiscard]] double total() const noexcept;
    [[nodiscard]] double mean_excitation() const noexcept;

    // Normalized P_n proportional to ratio^n on n = 0..n_max.
    static LadderState geometric(int n_max, double ratio);
};

struct RateContext {
    CycleSpec cycle;
    BathSpec baths;
    HarmonicDecomposition harmonics;

    // Checks member invariants and that the harmonic spacing matches the cycle.
    void validate() const;

    static RateContext build(const CycleSpec& cycle, const BathSpec& baths, const HarmonicOptions& options = {});
};

struct HeatCurrents {
    double hot = 0.0;
    double cold = 0.0;
    [[nodiscard]] double power() const noexcept { return -(hot + cold); }
};

// Birth-death generator of the Pauli master equation. Sideband sums are
// folded into per-transition coefficients once; evaluation at time t only
// rescales them by f_j^2(k, t).
class LadderGenerator {
public:
    LadderGenerator(const RateContext& ctx, int n_max, std::span<const double> level_spacings = {});

    [[nodiscard]] int n_max() const noexcept { return n_max_; }
    [[nodiscard]] const CycleSpec& cycle() const noexcept { return cycle_; }

    // dP/dt into out (same size as p). Columns of the generator sum to zero.
    void derivative(std::span<const double> p, double t, std::span<double> out) const;

    [[nodiscard]] HeatCurrents heat_currents(std::span<const double> p, double t) const;

    // Downward (emission) and upward (absorption) rate per quantum on
    // transition n <-> n+1 at time t; the n-dependent factor (n+1) excluded.
    [[nodiscard]] double emission(int transition, double t) const;
    [[nodiscard]] double absorption(int transition, double t) const;

    // Upper bound on the generator's spectral radius over the cycle.
    [[nodiscard]] double rate_bound() const noexcept { return rate_bound_; }

    // Cycle-averaged ratio absorption/emission on the first transition.
    [[nodiscard]] double mean_ratio() const;

private:
    struct Channel {
        std::vector<double> emission;
        std::vector<double> absorption;
        std::vector<double> emission_energy;
        std::vector<double> absorption_energy;
    };

    [[nodiscard]] std::array<double, 2> coupling_squares(double t) const;

    CycleSpec cycle_;
    int n_max_;
    std::array<Channel, 2> channels_;  // indexed by Bath
    double rate_bound_ = 0.0;
};

// dP_n/dt for a single state; convenience wrapper around LadderGenerator.
[[nodiscard]] std::vector<double> population_derivative(const RateContext& ctx, const LadderState& state, double t);

struct IntegrationOptions {
    int steps_per_cycle = 4096;
    // Steps are raised until dt * rate_bound <= stability_factor. The RK4
    // amplification factor stays in (0, 1) for real dt * lambda down to -2.78.
    double stability_factor = 2.0;
};

struct CycleTrace {
    int steps = 0;
    std::vector<double> times;
    std::vector<double> j_hot;
    std::vector<double> j_cold;
    double max_tail = 0.0;
    double max_renormalization = 0.0;
    double min_population = 0.0;
};

// Step count actually used for one period: max(requested, stability need).
[[nodiscard]] int effective_steps(const LadderGenerator& gen, const IntegrationOptions& options);

// Advances state by one coupling period tau_i with classical RK4, filling
// trace (if given) with J_h, J_c on the step grid including both endpoints.
[[nodiscard]] LadderState integrate_cycle(const RateContext& ctx, const LadderState& state, int n_steps,
                                          CycleTrace* trace = nullptr);
[[nodiscard]] LadderState integrate_cycle(const LadderGenerator& gen, const LadderState& state,
                                          const IntegrationOptions& options, CycleTrace* trace = nullptr);

struct LimitCycleOptions {
    int max_cycles = 10000;
    double tolerance = 1e-10;
    IntegrationOptions integration;
    double tail_tolerance = 1e-8;
    bool grow_ladder = true;
    int n_max_limit = 4096;
};

struct LimitCycle {
    LadderState state;
    int cycles = 0;
    double residual = 0.0;
};

// Iterates the stroboscopic map until max_n |P_n(t0 + tau_i) - P_n(t0)| < tol.
// The ladder is doubled whenever the top level exceeds the tail tolerance.
[[nodiscard]] LimitCycle find_limit_cycle(const RateContext& ctx, const LadderState& initial,
                                          const LimitCycleOptions& options = {});

// Steady state of the generator frozen at time t (detailed-balance chain).
// Throws IllDefinedError when both baths are decoupled or the chain is inverted.
[[nodiscard]] LadderState instantaneous_steady_state(const RateContext& ctx, double t, int n_max,
                                                     std::span<const double> level_spacings = {});

// A reasonable starting point for find_limit_cycle: the steady state of the
// cycle-averaged rates, on a ladder long enough for its tail.
[[nodiscard]] LadderState initial_guess(const RateContext& ctx, int n_max_min);

}  // namespace qhe
