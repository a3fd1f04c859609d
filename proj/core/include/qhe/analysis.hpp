#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhe/thermo.hpp"

namespace qhe {

// Numerical settings shared by every limit-cycle evaluation.
struct SolverOptions {
    HarmonicOptions harmonics;
    LimitCycleOptions limit_cycle;
    int n_max = 60;
};

// omega0 (T_h - T_c) / (T_h + T_c): modulation rate at which a continuous
// cycle turns from engine to refrigerator.
[[nodiscard]] double critical_rate(const BathSpec& bath, double omega0);

struct ReferenceEfficiencies {
    double continuous = 0.0;      // 2 delta_m / (omega0 + delta_m)
    double otto = 0.0;            // 1 - omega1 / omega2
    double carnot = 0.0;          // 1 - T_c / T_h
    double curzon_ahlborn = 0.0;  // 1 - sqrt(T_c / T_h)
};

[[nodiscard]] ReferenceEfficiencies reference_efficiencies(const CycleSpec& spec, const BathSpec& bath);

struct SweepPoint {
    double k = 0.0;
    double delta_m = 0.0;
    std::optional<CycleResult> result;
    double delta_omega_max = 0.0;
    double scaled_power = 0.0;  // |W| / delta_omega_max
    std::string error;          // empty on success

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

// Cartesian grid; rows are ordered k-major, then delta_m.
struct SweepGrid {
    std::vector<double> k_values;
    std::vector<double> delta_m_values;

    [[nodiscard]] std::size_t size() const noexcept { return k_values.size() * delta_m_values.size(); }
};

// One grid point: harmonics, limit cycle, cycle averages, scaled power.
// Failures are captured in SweepPoint::error instead of thrown.
[[nodiscard]] SweepPoint evaluate_point(double k, double delta_m, const CycleSpec& tmpl, const BathSpec& bath,
                                        const SolverOptions& options);

// Evaluates every grid point, concurrently when workers > 1. Output order
// matches grid order regardless of scheduling.
[[nodiscard]] std::vector<SweepPoint> sweep(const SweepGrid& grid, const CycleSpec& tmpl, const BathSpec& bath,
                                            const SolverOptions& options, int workers = 1);

class NoHeatEngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SpeedLimitStatus {
    crossing,       // W changes sign inside (0, delta_cr]
    at_critical,    // W < 0 across the whole bracket; capped at delta_cr
};

[[nodiscard]] const char* to_string(SpeedLimitStatus s) noexcept;

struct SpeedLimitOptions {
    int scan_points = 8;
    double tolerance = 1e-3;  // fraction of omega0
};

struct SpeedLimit {
    double k = 0.0;
    double value = 0.0;
    double critical = 0.0;
    SpeedLimitStatus status = SpeedLimitStatus::crossing;
    int evaluations = 0;
};

// Largest modulation rate in (0, delta_cr] at which the limit cycle still
// produces work: coarse scan for the first W < 0 -> W >= 0 change, then
// bisection. Throws NoHeatEngineError if W >= 0 everywhere on the bracket.
[[nodiscard]] SpeedLimit speed_limit(const CycleSpec& tmpl, const BathSpec& bath, double k,
                                     const SolverOptions& options, const SpeedLimitOptions& sl = {});

struct InverseTemperature {
    std::optional<double> value;
    std::string reason;  // why value is absent
};

// -log(r(t)) / omega0 with r the adjacent-level ratio of the instantaneous
// steady state.
[[nodiscard]] InverseTemperature effective_inverse_temperature(const RateContext& ctx, double t);
[[nodiscard]] InverseTemperature effective_inverse_temperature(const LadderGenerator& gen, double t);

struct TssTimescale {
    bool defined = false;
    double value = 0.0;          // 4 pi * rate_scale / delta_t
    double rate_scale = 0.0;     // coupling_factor * |Boltzmann difference| / max_curvature
    double coupling_factor = 0.0;  // max_t |f_c f_h (f_c - f_h) / (f_c^2 + f_h^2)^2|
    double max_curvature = 0.0;    // max_t |d^2 P_1^ss / dt^2|
    double delta_t = 0.0;
    std::string reason;
};

// Time scale on which the instantaneous steady state can be tracked.
// delta_t <= 0 selects tau_i / 1000.
[[nodiscard]] TssTimescale tss_timescale(const RateContext& ctx, double delta_t = 0.0, int grid_points = 2048,
                                         int n_max = 60);

}  // namespace qhe
