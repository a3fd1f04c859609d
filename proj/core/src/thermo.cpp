#include "qhe/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace qhe {

namespace {

// Averages below this multiple of omega0 * G0 are numerically zero.
constexpr double kDegenerateScale = 1e-12;

}  // namespace

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::heat_engine: return "HeatEngine";
        case Regime::heat_distributor: return "HeatDistributor";
        case Regime::refrigerator: return "Refrigerator";
        case Regime::degenerate: return "Degenerate";
    }
    return "Degenerate";
}

HeatCurrents heat_currents(const RateContext& ctx, const LadderState& state, double t) {
    const LadderGenerator gen(ctx, state.n_max(), state.level_spacings);
    return gen.heat_currents(state.populations, t);
}

Regime classify_regime(double j_hot, double j_cold, double power, double zero_tolerance) {
    auto sign = [zero_tolerance](double x) { return x > zero_tolerance ? 1 : (x < -zero_tolerance ? -1 : 0); };
    const int h = sign(j_hot);
    const int c = sign(j_cold);
    const int w = sign(power);
    if (w < 0 && c < 0 && h > 0) return Regime::heat_engine;
    if (w > 0 && c < 0) return Regime::heat_distributor;
    if (w > 0 && c > 0 && h < 0) return Regime::refrigerator;
    return Regime::degenerate;
}

double cycle_mean(const std::vector<double>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("cycle_mean: need at least two samples");
    double acc = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) acc += samples[i];
    return acc / static_cast<double>(samples.size() - 1);
}

CycleResult cycle_averages(const RateContext& ctx, const LimitCycle& limit, const IntegrationOptions& integration,
                           CycleTrace* trace) {
    const LadderGenerator gen(ctx, limit.state.n_max(), limit.state.level_spacings);
    CycleTrace local;
    CycleTrace& tr = trace ? *trace : local;
    (void)integrate_cycle(gen, limit.state, integration, &tr);

    CycleResult r;
    r.j_hot_avg = cycle_mean(tr.j_hot);
    r.j_cold_avg = cycle_mean(tr.j_cold);
    r.power_avg = -(r.j_hot_avg + r.j_cold_avg);
    r.cycles_to_converge = limit.cycles;
    r.residual = limit.residual;
    r.n_max = limit.state.n_max();
    r.steps = tr.steps;

    const double scale =
        kDegenerateScale * ctx.cycle.omega0 * std::max(ctx.baths.g_cold, ctx.baths.g_hot);
    if (std::abs(r.power_avg) <= scale && std::abs(r.j_hot_avg) <= scale) {
        r.regime = Regime::degenerate;
    } else {
        r.regime = classify_regime(r.j_hot_avg, r.j_cold_avg, r.power_avg);
    }
    if (r.regime == Regime::heat_engine) r.efficiency = -r.power_avg / r.j_hot_avg;
    return r;
}

CycleResult solve_cycle(const RateContext& ctx, const LimitCycleOptions& options, int n_max_min, CycleTrace* trace,
                        LimitCycle* limit_out) {
    const LimitCycle limit = find_limit_cycle(ctx, initial_guess(ctx, n_max_min), options);
    CycleResult r = cycle_averages(ctx, limit, options.integration, trace);
    if (limit_out) *limit_out = limit;
    return r;
}

}  // namespace qhe
