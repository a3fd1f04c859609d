#include "qhe/cycle.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMinAmplitudeSamples = 4096;

[[noreturn]] void invalid(const std::string& what) {
    throw std::invalid_argument("CycleSpec: " + what);
}

}  // namespace

void CycleSpec::validate() const {
    if (!(k >= 0.0)) invalid("k must be >= 0");
    if (!(delta_m > 0.0) || !std::isfinite(delta_m)) invalid("delta_m must be positive and finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) invalid("lambda must be >= 0");
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) invalid("omega0 must be positive");
    if (!std::isfinite(omega1) || !std::isfinite(omega2)) invalid("omega1/omega2 must be finite");
    if (omega1 > omega2) invalid("omega1 must not exceed omega2");
    if (omega1 > omega0 || omega0 > omega2) invalid("omega1 <= omega0 <= omega2 violated");
    // The stroke profile must average to omega0 or the phase drifts every period.
    if (std::abs(0.5 * (omega1 + omega2) - omega0) > 1e-9 * omega0) {
        invalid("omega0 must be the midpoint of omega1 and omega2");
    }
    if (n2 < 1) invalid("n2 must be >= 1");
    if (n1 <= n2) invalid("n1 must exceed n2");
}

int phi(const CycleSpec& spec) {
    if (std::isinf(spec.k)) return 1;
    const double ratio = (spec.k + spec.n1) / (spec.k + spec.n2);
    return std::max(1, static_cast<int>(std::floor(ratio + 0.5)));
}

int CycleSpec::phi() const { return qhe::phi(*this); }

double CycleSpec::tau_m() const { return kTwoPi / delta_m; }

double CycleSpec::tau_i() const { return phi() * tau_m(); }

double CycleSpec::delta_i() const { return delta_m / phi(); }

double CycleSpec::continuous_weight() const { return std::isinf(k) ? 0.0 : std::exp(-k); }

double CycleSpec::otto_weight() const {
    if (k == 0.0) return 0.0;
    if (std::isinf(k)) return 1.0;
    return std::exp(-1.0 / k);
}

double CycleSpec::reduce(double t) const {
    const double period = tau_i();
    double r = std::fmod(t, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

double otto_profile(const CycleSpec& spec, double t) {
    const double low = spec.omega1 - spec.omega0;
    const double high = spec.omega2 - spec.omega0;
    const double x = spec.reduce(t) / spec.tau_i();
    if (x <= 0.25) return low + (high - low) * (x / 0.25);
    if (x <= 0.5) return high;
    if (x <= 0.75) return high + (low - high) * ((x - 0.5) / 0.25);
    return low;
}

double omega(const CycleSpec& spec, double t) {
    const double tr = spec.reduce(t);
    double w = spec.omega0;
    const double cw = spec.continuous_weight();
    if (cw > 0.0) w += cw * spec.lambda * spec.delta_m * std::sin(spec.delta_m * tr);
    const double ow = spec.otto_weight();
    if (ow > 0.0) w += ow * otto_profile(spec, tr);
    return w;
}

double coupling_window(Bath bath, double x) {
    x -= std::floor(x);
    if (bath == Bath::hot) {
        x -= 0.5;
        if (x < 0.0) x += 1.0;
    }
    if (x < 0.125) return 0.0;
    if (x < 0.25) return (x - 0.125) * 8.0;
    if (x <= 0.5) return 1.0;
    if (x < 0.625) return 1.0 - (x - 0.5) * 8.0;
    return 0.0;
}

double coupling(const CycleSpec& spec, Bath bath, double t) {
    const double window = coupling_window(bath, spec.reduce(t) / spec.tau_i());
    if (window >= 1.0 || spec.k == 0.0) return 1.0;
    if (std::isinf(spec.k)) return 0.0;
    return std::exp(-spec.k * (1.0 - window));
}

double max_modulation_amplitude(const CycleSpec& spec) {
    const double period = spec.tau_i();
    const int cycles = spec.phi();
    auto deviation = [&](double t) { return std::abs(omega(spec, t) - spec.omega0); };

    double best = 0.0;
    const int samples = std::max(kMinAmplitudeSamples, 64 * cycles);
    for (int i = 0; i < samples; ++i) best = std::max(best, deviation(period * i / samples));

    // Analytic candidates: stroke corners, sine crests, and stationary points
    // of (sine + ramp) on the two ramps.
    std::vector<double> candidates = {0.0, 0.25 * period, 0.5 * period, 0.75 * period};
    const double tm = spec.tau_m();
    for (int c = 0; c < 2 * cycles; ++c) candidates.push_back((0.25 + 0.5 * c) * tm);

    const double amp = spec.continuous_weight() * spec.lambda * spec.delta_m;
    const double ow = spec.otto_weight();
    if (amp > 0.0 && ow > 0.0) {
        const double slope = ow * (spec.omega2 - spec.omega1) / (0.25 * period);
        for (double s : {slope, -slope}) {
            // d/dt [amp sin(dm t) + s t] = 0  ->  cos(dm t) = -s / (amp dm)
            const double c = -s / (amp * spec.delta_m);
            if (std::abs(c) > 1.0) continue;
            const double base = std::acos(c);
            for (int m = 0; m < cycles; ++m) {
                candidates.push_back((base + kTwoPi * m) / spec.delta_m);
                candidates.push_back((kTwoPi - base + kTwoPi * m) / spec.delta_m);
            }
        }
    }
    for (double t : candidates) best = std::max(best, deviation(t));
    return best;
}

}  // namespace qhe
