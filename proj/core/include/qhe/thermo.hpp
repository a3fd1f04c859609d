#pragma once

#include <optional>
#include <string>

#include "qhe/dynamics.hpp"

namespace qhe {

enum class Regime { heat_engine, heat_distributor, refrigerator, degenerate };

[[nodiscard]] const char* to_string(Regime r) noexcept;

struct CycleResult {
    double j_hot_avg = 0.0;
    double j_cold_avg = 0.0;
    double power_avg = 0.0;
    std::optional<double> efficiency;  // only in the heat-engine regime
    Regime regime = Regime::degenerate;
    int cycles_to_converge = 0;
    double residual = 0.0;
    int n_max = 0;
    int steps = 0;
};

// Instantaneous currents out of the hot and cold baths for a given state.
[[nodiscard]] HeatCurrents heat_currents(const RateContext& ctx, const LadderState& state, double t);

// Sign classification of cycle-averaged currents. Values with magnitude at or
// below zero_tolerance count as zero.
[[nodiscard]] Regime classify_regime(double j_hot, double j_cold, double power, double zero_tolerance = 0.0);

// Integrates one more period from the limit-cycle state and averages J_h,
// J_c and the power with the trapezoid rule on the integrator grid.
[[nodiscard]] CycleResult cycle_averages(const RateContext& ctx, const LimitCycle& limit,
                                         const IntegrationOptions& integration = {}, CycleTrace* trace = nullptr);

// Limit-cycle search followed by cycle_averages.
[[nodiscard]] CycleResult solve_cycle(const RateContext& ctx, const LimitCycleOptions& options = {},
                                      int n_max_min = 60, CycleTrace* trace = nullptr,
                                      LimitCycle* limit_out = nullptr);

// Trapezoid-rule mean of samples on a uniform grid spanning `period`.
[[nodiscard]] double cycle_mean(const std::vector<double>& samples);

}  // namespace qhe
