#include "qhe/analysis.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace qhe {

double critical_rate(const BathSpec& bath, double omega0) {
    return omega0 * (bath.t_hot - bath.t_cold) / (bath.t_hot + bath.t_cold);
}

ReferenceEfficiencies reference_efficiencies(const CycleSpec& spec, const BathSpec& bath) {
    ReferenceEfficiencies e;
    e.continuous = 2.0 * spec.delta_m / (spec.omega0 + spec.delta_m);
    e.otto = 1.0 - spec.omega1 / spec.omega2;
    e.carnot = 1.0 - bath.t_cold / bath.t_hot;
    e.curzon_ahlborn = 1.0 - std::sqrt(bath.t_cold / bath.t_hot);
    return e;
}

SweepPoint evaluate_point(double k, double delta_m, const CycleSpec& tmpl, const BathSpec& bath,
                          const SolverOptions& options) {
    SweepPoint pt;
    pt.k = k;
    pt.delta_m = delta_m;
    try {
        CycleSpec spec = tmpl;
        spec.k = k;
        spec.delta_m = delta_m;
        const RateContext ctx = RateContext::build(spec, bath, options.harmonics);
        pt.result = solve_cycle(ctx, options.limit_cycle, options.n_max);
        pt.delta_omega_max = max_modulation_amplitude(spec);
        pt.scaled_power = pt.delta_omega_max > 0.0 ? std::abs(pt.result->power_avg) / pt.delta_omega_max : 0.0;
    } catch (const std::exception& e) {
        pt.result.reset();
        pt.error = e.what();
    }
    return pt;
}

std::vector<SweepPoint> sweep(const SweepGrid& grid, const CycleSpec& tmpl, const BathSpec& bath,
                              const SolverOptions& options, int workers) {
    if (grid.size() == 0) throw std::invalid_argument("sweep: empty grid");
    const std::size_t n = grid.size();
    const std::size_t n_dm = grid.delta_m_values.size();
    std::vector<SweepPoint> out(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            out[i] = evaluate_point(grid.k_values[i / n_dm], grid.delta_m_values[i % n_dm], tmpl, bath, options);
        }
    };
    const auto threads = static_cast<std::size_t>(std::clamp(workers, 1, static_cast<int>(n)));
    if (threads == 1) {
        work();
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    pool.clear();
    return out;
}

const char* to_string(SpeedLimitStatus s) noexcept {
    return s == SpeedLimitStatus::crossing ? "crossing" : "at_critical";
}

SpeedLimit speed_limit(const CycleSpec& tmpl, const BathSpec& bath, double k, const SolverOptions& options,
                       const SpeedLimitOptions& sl) {
    SpeedLimit res;
    res.k = k;
    res.critical = critical_rate(bath, tmpl.omega0);
    if (!(res.critical > 0.0)) throw NoHeatEngineError("speed_limit: empty bracket (T_h == T_c)");

    auto power_at = [&](double dm) {
        ++res.evaluations;
        const SweepPoint pt = evaluate_point(k, dm, tmpl, bath, options);
        if (!pt.ok()) throw std::runtime_error("speed_limit: evaluation at delta_m=" + std::to_string(dm) +
                                               " failed: " + pt.error);
        return pt.result->power_avg;
    };

    const int scan = std::max(2, sl.scan_points);
    double lo = 0.0;
    double hi = 0.0;
    bool seen_engine = false;
    bool bracketed = false;
    for (int j = 1; j <= scan; ++j) {
        const double dm = res.critical * j / scan;
        const double w = power_at(dm);
        if (w < 0.0) {
            seen_engine = true;
            lo = dm;
        } else if (seen_engine) {
            hi = dm;
            bracketed = true;
            break;
        }
    }
    if (!seen_engine) throw NoHeatEngineError("speed_limit: no heat-engine regime on (0, delta_cr]");
    if (!bracketed) {
        res.value = res.critical;
        res.status = SpeedLimitStatus::at_critical;
        return res;
    }
    const double tol = sl.tolerance * tmpl.omega0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (power_at(mid) < 0.0 ? lo : hi) = mid;
    }
    res.value = 0.5 * (lo + hi);
    res.status = SpeedLimitStatus::crossing;
    return res;
}

InverseTemperature effective_inverse_temperature(const LadderGenerator& gen, double t) {
    const CycleSpec& spec = gen.cycle();
    const double fc = coupling(spec, Bath::cold, t);
    const double fh = coupling(spec, Bath::hot, t);
    if (std::max(fc, fh) < kVanishingCoupling) return {std::nullopt, "baths decoupled"};
    const double down = gen.emission(0, t);
    const double up = gen.absorption(0, t);
    if (!(down > 0.0)) return {std::nullopt, "no emission channel"};
    const double ratio = up / down;
    if (!(ratio > 0.0)) return {std::nullopt, "non-positive level ratio"};
    return {-std::log(ratio) / spec.omega0, {}};
}

InverseTemperature effective_inverse_temperature(const RateContext& ctx, double t) {
    return effective_inverse_temperature(LadderGenerator(ctx, 1), t);
}

TssTimescale tss_timescale(const RateContext& ctx, double delta_t, int grid_points, int n_max) {
    TssTimescale out;
    const auto& spec = ctx.cycle;
    const double period = spec.tau_i();
    out.delta_t = delta_t > 0.0 ? delta_t : period / 1000.0;
    const double h = out.delta_t;

    const double numerator = std::abs(std::exp(-spec.omega2 / ctx.baths.t_hot) - std::exp(-spec.omega1 / ctx.baths.t_cold));

    for (int i = 0; i < grid_points; ++i) {
        const double t = period * i / grid_points;
        const double fc = coupling(spec, Bath::cold, t);
        const double fh = coupling(spec, Bath::hot, t);
        if (std::max(fc, fh) < kVanishingCoupling) {
            out.reason = "coupling factor is 0/0 where both baths are decoupled";
            return out;
        }
        const double denom = fc * fc + fh * fh;
        out.coupling_factor = std::max(out.coupling_factor, std::abs(fc * fh * (fc - fh) / (denom * denom)));
    }
    out.defined = true;
    if (out.coupling_factor == 0.0) return out;

    const LadderGenerator gen(ctx, n_max);
    auto p1 = [&](double t) {
        // P_1 of the detailed-balance chain with frozen rates
        const double r = gen.absorption(0, t) / gen.emission(0, t);
        double norm = 0.0;
        double w = 1.0;
        for (int n = 0; n <= n_max; ++n) {
            norm += w;
            w *= r;
        }
        return r / norm;
    };
    for (int i = 0; i < grid_points; ++i) {
        const double t = period * i / grid_points;
        const double curvature = (p1(t + h) - 2.0 * p1(t) + p1(t - h + period)) / (h * h);
        out.max_curvature = std::max(out.max_curvature, std::abs(curvature));
    }
    if (out.max_curvature == 0.0) {
        out.defined = false;
        out.reason = "instantaneous steady state does not vary";
        return out;
    }
    out.rate_scale = out.coupling_factor * numerator / out.max_curvature;
    out.value = 4.0 * std::numbers::pi * out.rate_scale / h;
    return out;
}

}  // namespace qhe
