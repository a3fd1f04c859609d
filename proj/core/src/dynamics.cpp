#include "qhe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace qhe {

namespace {

constexpr std::array<Bath, 2> kBaths = {Bath::cold, Bath::hot};
constexpr double kNegativeClip = -1e-12;
constexpr double kNegativeFailure = -1e-6;
constexpr int kRatioGridPoints = 1024;
constexpr double kGuessTail = 1e-10;
constexpr int kGuessLadderCap = 2048;

std::size_t idx(Bath b) { return b == Bath::cold ? 0 : 1; }

}  // namespace

double LadderState::total() const noexcept {
    double s = 0.0;
    for (double p : populations) s += p;
    return s;
}

double LadderState::mean_excitation() const noexcept {
    double s = 0.0;
    for (std::size_t n = 0; n < populations.size(); ++n) s += static_cast<double>(n) * populations[n];
    return s;
}

LadderState LadderState::geometric(int n_max, double ratio) {
    if (n_max < 1) throw std::invalid_argument("LadderState: n_max must be >= 1");
    if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw std::invalid_argument("LadderState: bad geometric ratio");
    LadderState s;
    s.populations.resize(static_cast<std::size_t>(n_max) + 1);
    double w = 1.0;
    for (auto& p : s.populations) {
        p = w;
        w *= ratio;
    }
    const double norm = s.total();
    for (auto& p : s.populations) p /= norm;
    return s;
}

void RateContext::validate() const {
    cycle.validate();
    baths.validate();
    const double spacing = cycle.delta_i();
    if (std::abs(harmonics.base_freq - spacing) > 1e-12 * spacing) {
        throw std::invalid_argument("RateContext: harmonic spacing does not match the coupling period");
    }
    if (harmonics.weights.size() != static_cast<std::size_t>(2 * harmonics.q_max + 1)) {
        throw std::invalid_argument("RateContext: malformed harmonic weights");
    }
    for (double w : harmonics.weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("RateContext: negative harmonic weight");
    }
}

RateContext RateContext::build(const CycleSpec& cycle, const BathSpec& baths, const HarmonicOptions& options) {
    cycle.validate();
    baths.validate();
    return RateContext{cycle, baths, resolve_harmonics(cycle, options)};
}

LadderGenerator::LadderGenerator(const RateContext& ctx, int n_max, std::span<const double> level_spacings)
    : cycle_(ctx.cycle), n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("LadderGenerator: n_max must be >= 1");
    if (!level_spacings.empty() && level_spacings.size() != static_cast<std::size_t>(n_max)) {
        throw std::invalid_argument("LadderGenerator: level_spacings must have n_max entries");
    }
    const auto transitions = static_cast<std::size_t>(n_max);
    for (auto& ch : channels_) {
        ch.emission.assign(transitions, 0.0);
        ch.absorption.assign(transitions, 0.0);
        ch.emission_energy.assign(transitions, 0.0);
        ch.absorption_energy.assign(transitions, 0.0);
    }

    const auto& h = ctx.harmonics;
    for (std::size_t i = 0; i < transitions; ++i) {
        const double gap = level_spacings.empty() ? ctx.cycle.omega0 : level_spacings[i];
        for (int q = -h.q_max; q <= h.q_max; ++q) {
            const double weight = h.weight(q);
            if (weight == 0.0) continue;
            const double w = gap + q * h.base_freq;
            for (Bath b : kBaths) {
                const double g = spectral_response(ctx.baths, b, w);
                // KMS: below zero frequency G(w) e^{-w/T} is the positive-band value, taken
                // directly because e^{w/T} may underflow while the absorption rate does not
                const double up = w < 0.0 ? spectral_response(ctx.baths, b, -w) : g * boltzmann_factor(ctx.baths, b, w);
                if (g == 0.0 && up == 0.0) continue;
                if (!std::isfinite(up) || !std::isfinite(g)) {
                    throw std::overflow_error("LadderGenerator: Boltzmann factor overflow at sideband omega=" +
                                              std::to_string(w));
                }
                auto& ch = channels_[idx(b)];
                ch.emission[i] += weight * g;
                ch.absorption[i] += weight * up;
                ch.emission_energy[i] += weight * g * w;
                ch.absorption_energy[i] += weight * up * w;
            }
        }
    }

    for (int n = 0; n <= n_max_; ++n) {
        double out = 0.0;
        for (const auto& ch : channels_) {
            if (n > 0) out += n * ch.emission[static_cast<std::size_t>(n - 1)];
            if (n < n_max_) out += (n + 1) * ch.absorption[static_cast<std::size_t>(n)];
        }
        rate_bound_ = std::max(rate_bound_, 2.0 * out);
    }
}

std::array<double, 2> LadderGenerator::coupling_squares(double t) const {
    const double fc = coupling(cycle_, Bath::cold, t);
    const double fh = coupling(cycle_, Bath::hot, t);
    return {fc * fc, fh * fh};
}

double LadderGenerator::emission(int transition, double t) const {
    const auto f2 = coupling_squares(t);
    const auto i = static_cast<std::size_t>(transition);
    return f2[0] * channels_[0].emission[i] + f2[1] * channels_[1].emission[i];
}

double LadderGenerator::absorption(int transition, double t) const {
    const auto f2 = coupling_squares(t);
    const auto i = static_cast<std::size_t>(transition);
    return f2[0] * channels_[0].absorption[i] + f2[1] * channels_[1].absorption[i];
}

void LadderGenerator::derivative(std::span<const double> p, double t, std::span<double> out) const {
    const auto f2 = coupling_squares(t);
    const auto& c = channels_[0];
    const auto& h = channels_[1];
    std::fill(out.begin(), out.end(), 0.0);
    for (int i = 0; i < n_max_; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const double up = f2[0] * c.absorption[u] + f2[1] * h.absorption[u];
        const double down = f2[0] * c.emission[u] + f2[1] * h.emission[u];
        const double flow = (i + 1) * (up * p[u] - down * p[u + 1]);
        out[u] -= flow;
        out[u + 1] += flow;
    }
}

HeatCurrents LadderGenerator::heat_currents(std::span<const double> p, double t) const {
    const auto f2 = coupling_squares(t);
    std::array<double, 2> j = {0.0, 0.0};
    for (std::size_t b = 0; b < 2; ++b) {
        if (f2[b] == 0.0) continue;
        const auto& ch = channels_[b];
        double acc = 0.0;
        for (int i = 0; i < n_max_; ++i) {
            const auto u = static_cast<std::size_t>(i);
            acc += (i + 1) * (ch.absorption_energy[u] * p[u] - ch.emission_energy[u] * p[u + 1]);
        }
        j[b] = f2[b] * acc;
    }
    return HeatCurrents{j[1], j[0]};
}

double LadderGenerator::mean_ratio() const {
    const double period = cycle_.tau_i();
    double up = 0.0;
    double down = 0.0;
    for (int m = 0; m < kRatioGridPoints; ++m) {
        const double t = period * (m + 0.5) / kRatioGridPoints;
        up += absorption(0, t);
        down += emission(0, t);
    }
    return down > 0.0 ? up / down : 0.0;
}

std::vector<double> population_derivative(const RateContext& ctx, const LadderState& state, double t) {
    const LadderGenerator gen(ctx, state.n_max(), state.level_spacings);
    std::vector<double> out(state.populations.size());
    gen.derivative(state.populations, t, out);
    for (double d : out) {
        if (!std::isfinite(d)) throw std::overflow_error("population_derivative: non-finite rate");
    }
    return out;
}

int effective_steps(const LadderGenerator& gen, const IntegrationOptions& options) {
    const double period = gen.cycle().tau_i();
    const double needed = std::ceil(period * gen.rate_bound() / options.stability_factor);
    if (needed > 1e9) throw StepSizeError("integrate_cycle: generator too stiff for fixed-step RK4");
    return std::max(options.steps_per_cycle, static_cast<int>(needed));
}

LadderState integrate_cycle(const LadderGenerator& gen, const LadderState& state, const IntegrationOptions& options,
                            CycleTrace* trace) {
    if (state.n_max() != gen.n_max()) throw std::invalid_argument("integrate_cycle: ladder size mismatch");
    const int steps = effective_steps(gen, options);
    const double period = gen.cycle().tau_i();
    const double dt = period / steps;
    const double t0 = state.time;

    LadderState out = state;
    auto& p = out.populations;
    const std::size_t n = p.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    if (trace) {
        *trace = CycleTrace{};
        trace->steps = steps;
        trace->times.reserve(static_cast<std::size_t>(steps) + 1);
        trace->j_hot.reserve(static_cast<std::size_t>(steps) + 1);
        trace->j_cold.reserve(static_cast<std::size_t>(steps) + 1);
        trace->min_population = *std::min_element(p.begin(), p.end());
        trace->max_tail = p.back();
    }
    auto record = [&](double t) {
        if (!trace) return;
        const auto j = gen.heat_currents(p, t);
        trace->times.push_back(t);
        trace->j_hot.push_back(j.hot);
        trace->j_cold.push_back(j.cold);
    };

    for (int s = 0; s < steps; ++s) {
        const double t = t0 + s * dt;
        record(t);
        gen.derivative(p, t, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * dt * k1[i];
        gen.derivative(tmp, t + 0.5 * dt, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * dt * k2[i];
        gen.derivative(tmp, t + 0.5 * dt, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + dt * k3[i];
        gen.derivative(tmp, t + dt, k4);

        double sum = 0.0;
        double lowest = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            lowest = std::min(lowest, p[i]);
            if (p[i] < 0.0 && p[i] >= kNegativeClip) p[i] = 0.0;
            sum += p[i];
        }
        if (lowest < kNegativeFailure || !std::isfinite(sum)) {
            throw StepSizeError("integrate_cycle: population fell to " + std::to_string(lowest) +
                                "; step size too coarse");
        }
        for (auto& x : p) x = std::max(0.0, x) / sum;
        if (trace) {
            trace->max_renormalization = std::max(trace->max_renormalization, std::abs(sum - 1.0));
            trace->min_population = std::min(trace->min_population, lowest);
            trace->max_tail = std::max(trace->max_tail, p.back());
        }
    }
    out.time = t0 + period;
    record(out.time);
    return out;
}

LadderState integrate_cycle(const RateContext& ctx, const LadderState& state, int n_steps, CycleTrace* trace) {
    if (n_steps < 1000) throw std::invalid_argument("integrate_cycle: need at least 1000 steps per period");
    const LadderGenerator gen(ctx, state.n_max(), state.level_spacings);
    IntegrationOptions options;
    options.steps_per_cycle = n_steps;
    return integrate_cycle(gen, state, options, trace);
}

namespace {

LadderState grow(const LadderState& s) {
    LadderState g = s;
    const int n_max = 2 * s.n_max();
    g.populations.resize(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (!s.level_spacings.empty()) g.level_spacings.resize(static_cast<std::size_t>(n_max), s.level_spacings.back());
    return g;
}

}  // namespace

LimitCycle find_limit_cycle(const RateContext& ctx, const LadderState& initial, const LimitCycleOptions& options) {
    LadderState current = initial;
    auto gen = std::make_unique<LadderGenerator>(ctx, current.n_max(), current.level_spacings);
    double residual = std::numeric_limits<double>::infinity();
    CycleTrace trace;

    for (int cycle = 1; cycle <= options.max_cycles; ++cycle) {
        LadderState next = integrate_cycle(*gen, current, options.integration, &trace);
        residual = 0.0;
        for (std::size_t i = 0; i < next.populations.size(); ++i) {
            residual = std::max(residual, std::abs(next.populations[i] - current.populations[i]));
        }
        // Stroboscopic comparison is made at a fixed phase of the cycle.
        next.time = current.time;

        if (trace.max_tail > options.tail_tolerance) {
            if (!options.grow_ladder || 2 * next.n_max() > options.n_max_limit) {
                throw ConvergenceError("find_limit_cycle: ladder truncation violated (top level population " +
                                           std::to_string(trace.max_tail) + ")",
                                       residual, cycle);
            }
            current = grow(next);
            gen = std::make_unique<LadderGenerator>(ctx, current.n_max(), current.level_spacings);
            continue;
        }
        current = std::move(next);
        if (residual < options.tolerance) return LimitCycle{std::move(current), cycle, residual};
    }
    throw ConvergenceError("find_limit_cycle: no convergence after " + std::to_string(options.max_cycles) +
                               " cycles (residual " + std::to_string(residual) + ")",
                           residual, options.max_cycles);
}

LadderState instantaneous_steady_state(const RateContext& ctx, double t, int n_max,
                                       std::span<const double> level_spacings) {
    const double fc = coupling(ctx.cycle, Bath::cold, t);
    const double fh = coupling(ctx.cycle, Bath::hot, t);
    if (std::max(fc, fh) < kVanishingCoupling) {
        throw IllDefinedError("instantaneous_steady_state: both baths decoupled");
    }
    const LadderGenerator gen(ctx, n_max, level_spacings);
    LadderState s;
    s.level_spacings.assign(level_spacings.begin(), level_spacings.end());
    s.time = t;
    s.populations.resize(static_cast<std::size_t>(n_max) + 1);
    double w = 1.0;
    for (int i = 0; i <= n_max; ++i) {
        s.populations[static_cast<std::size_t>(i)] = w;
        if (i == n_max) break;
        const double down = gen.emission(i, t);
        const double up = gen.absorption(i, t);
        if (!(down > 0.0)) throw IllDefinedError("instantaneous_steady_state: no emission channel");
        const double ratio = up / down;
        if (ratio >= 1.0) throw IllDefinedError("instantaneous_steady_state: population inversion (ratio >= 1)");
        w *= ratio;
    }
    const double norm = s.total();
    for (auto& p : s.populations) p /= norm;
    return s;
}

LadderState initial_guess(const RateContext& ctx, int n_max_min) {
    const LadderGenerator probe(ctx, 1);
    double ratio = probe.mean_ratio();
    if (!(ratio < 1.0)) ratio = 0.9;
    int n_max = std::max(1, n_max_min);
    if (ratio > 0.0) {
        const int needed = static_cast<int>(std::ceil(std::log(kGuessTail) / std::log(ratio)));
        n_max = std::max(n_max, std::min(needed, kGuessLadderCap));
    }
    return LadderState::geometric(n_max, ratio);
}

}  // namespace qhe
