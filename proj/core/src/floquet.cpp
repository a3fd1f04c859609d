#include "qhe/floquet.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

namespace qhe {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

class BackwardPlan {
public:
    explicit BackwardPlan(int n)
        : data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n)))) {
        if (!data_) throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(n, data_.get(), data_.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!plan_) throw std::runtime_error("fftw: plan creation failed");
    }
    ~BackwardPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    BackwardPlan(const BackwardPlan&) = delete;
    BackwardPlan& operator=(const BackwardPlan&) = delete;

    fftw_complex* data() { return data_.get(); }
    void execute() { fftw_execute(plan_); }

private:
    std::unique_ptr<fftw_complex, FftwFree> data_;
    fftw_plan plan_ = nullptr;
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// integral_0^x of the unit-period trapezoid, x in [0, 1]
double trapezoid_integral(double low, double high, double x) {
    struct Segment {
        double a, b, va, vb;
    };
    const Segment segs[] = {
        {0.0, 0.25, low, high}, {0.25, 0.5, high, high}, {0.5, 0.75, high, low}, {0.75, 1.0, low, low}};
    double acc = 0.0;
    for (const auto& s : segs) {
        if (x <= s.a) break;
        const double h = std::min(x, s.b) - s.a;
        acc += s.va * h + 0.5 * (s.vb - s.va) / (s.b - s.a) * h * h;
    }
    return acc;
}

}  // namespace

double HarmonicDecomposition::weight(int q) const {
    if (q < -q_max || q > q_max) return 0.0;
    return weights[static_cast<std::size_t>(q + q_max)];
}

double HarmonicDecomposition::retained_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

HarmonicDecomposition HarmonicDecomposition::from_lines(double base_freq,
                                                        const std::vector<std::pair<int, double>>& lines) {
    HarmonicDecomposition h;
    h.base_freq = base_freq;
    for (const auto& [q, w] : lines) h.q_max = std::max(h.q_max, std::abs(q));
    h.weights.assign(static_cast<std::size_t>(2 * h.q_max + 1), 0.0);
    double total = 0.0;
    for (const auto& [q, w] : lines) {
        if (w < 0.0) throw std::invalid_argument("HarmonicDecomposition: negative weight");
        h.weights[static_cast<std::size_t>(q + h.q_max)] += w;
        total += w;
    }
    h.tail_mass = std::max(0.0, 1.0 - total);
    return h;
}

double phase_integral(const CycleSpec& spec, double t) {
    const double tr = spec.reduce(t);
    double phase = 0.0;
    const double cw = spec.continuous_weight();
    if (cw > 0.0) phase += cw * spec.lambda * (1.0 - std::cos(spec.delta_m * tr));
    const double ow = spec.otto_weight();
    if (ow > 0.0) {
        const double period = spec.tau_i();
        phase += ow * period *
                 trapezoid_integral(spec.omega1 - spec.omega0, spec.omega2 - spec.omega0, tr / period);
    }
    return phase;
}

HarmonicDecomposition harmonic_weights(const CycleSpec& spec, int q_max, int n_samples, double tail_tolerance) {
    if (q_max < 1) throw std::invalid_argument("harmonic_weights: q_max must be >= 1");
    if (!is_power_of_two(n_samples) || n_samples < 4096) {
        throw std::invalid_argument("harmonic_weights: n_samples must be a power of two >= 4096");
    }
    if (2 * q_max >= n_samples) throw std::invalid_argument("harmonic_weights: q_max must be below n_samples / 2");

    const double period = spec.tau_i();
    BackwardPlan fft(n_samples);
    fftw_complex* z = fft.data();
    for (int m = 0; m < n_samples; ++m) {
        const double ph = phase_integral(spec, period * m / n_samples);
        z[m][0] = std::cos(ph);
        z[m][1] = -std::sin(ph);
    }
    // Backward transform: sum_m z_m e^{+2 pi i q m / n}; weight at omega0 + q delta_i.
    fft.execute();

    const double inv_n = 1.0 / n_samples;
    auto power = [&](int bin) {
        const double re = z[bin][0] * inv_n;
        const double im = z[bin][1] * inv_n;
        return re * re + im * im;
    };

    HarmonicDecomposition h;
    h.base_freq = spec.delta_i();
    h.q_max = q_max;
    h.weights.resize(static_cast<std::size_t>(2 * q_max + 1));
    for (int q = -q_max; q <= q_max; ++q) {
        h.weights[static_cast<std::size_t>(q + q_max)] = power(q >= 0 ? q : q + n_samples);
    }
    double tail = 0.0;
    for (int bin = q_max + 1; bin < n_samples - q_max; ++bin) tail += power(bin);
    h.tail_mass = tail;

    if (tail > tail_tolerance) {
        throw TruncationError("harmonic_weights: tail mass " + std::to_string(tail) + " exceeds tolerance at q_max=" +
                                  std::to_string(q_max),
                              tail);
    }
    return h;
}

HarmonicDecomposition resolve_harmonics(const CycleSpec& spec, const HarmonicOptions& options) {
    int q_max = std::max(1, options.q_max);
    int n_samples = options.n_samples;
    while (true) {
        if (2 * q_max >= n_samples) {
            if (n_samples >= options.max_samples) break;
            n_samples *= 2;
        }
        try {
            return harmonic_weights(spec, q_max, n_samples, options.tail_tolerance);
        } catch (const TruncationError&) {
            q_max *= 2;
        }
    }
    // Last resort: the widest window allowed by the sample budget.
    return harmonic_weights(spec, n_samples / 2 - 1, n_samples, options.tail_tolerance);
}

}  // namespace qhe
