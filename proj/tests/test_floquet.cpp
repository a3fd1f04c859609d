#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qhe/floquet.hpp"

using namespace qhe;

namespace {

CycleSpec spec(double k, double delta_m, double lambda) {
    CycleSpec s;
    s.k = k;
    s.delta_m = delta_m;
    s.lambda = lambda;
    return s;
}

double total(const HarmonicDecomposition& h) { return h.retained_mass() + h.tail_mass; }

}  // namespace

TEST_CASE("phase integral closed forms") {
    const CycleSpec s = spec(0.0, 1.0, 0.1);
    CHECK(phase_integral(s, 0.0) == 0.0);
    CHECK(phase_integral(s, s.tau_m()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(phase_integral(s, s.tau_m() / 2.0) == doctest::Approx(0.2));
}

TEST_CASE("phase integral matches quadrature of omega") {
    for (double k : {0.0, 0.7, 3.0, 40.0}) {
        const CycleSpec s = spec(k, 1.3, 0.4);
        const double T = s.tau_i();
        const int n = 200000;
        double acc = 0.0;
        const double h = T / n;
        for (int i = 0; i < n; ++i) {
            const double t = i * h;
            // Simpson on each sub-interval
            acc += h / 6.0 * ((omega(s, t) - s.omega0) + 4.0 * (omega(s, t + h / 2) - s.omega0) +
                              (omega(s, t + h) - s.omega0));
            if ((i + 1) % 20000 == 0) {
                CAPTURE(k);
                CAPTURE(t + h);
                CHECK(phase_integral(s, t + h) == doctest::Approx(acc).scale(1.0).epsilon(1e-8));
            }
        }
        // a full period returns to zero phase
        CHECK(std::abs(phase_integral(s, T)) < 1e-8);
    }
}

TEST_CASE("no modulation gives a single carrier line") {
    CycleSpec s = spec(2.0, 1.0, 0.0);
    s.omega1 = s.omega2 = s.omega0;
    const auto h = harmonic_weights(s, 8, 4096);
    CHECK(h.weight(0) == doctest::Approx(1.0).epsilon(1e-14));
    for (int q = 1; q <= 8; ++q) {
        CHECK(h.weight(q) < 1e-28);
        CHECK(h.weight(-q) < 1e-28);
    }
}

TEST_CASE("continuous cycle reproduces the Bessel series") {
    for (double lambda : {0.1, 0.5, 1.0}) {
        CAPTURE(lambda);
        const CycleSpec s = spec(0.0, 1.0, lambda);
        const int Phi = s.phi();
        const auto h = resolve_harmonics(s);
        CHECK(h.base_freq == doctest::Approx(s.delta_m / Phi));
        for (int q = -4; q <= 4; ++q) {
            const double j = oracle::bessel_j(q, lambda);
            CHECK(std::abs(h.weight(q * Phi) - j * j) < 1e-6);
            // off-grid bins are empty
            if (q != 4) CHECK(h.weight(q * Phi + 1) < 1e-12);
        }
    }
    const auto h = resolve_harmonics(spec(0.0, 1.0, 0.1));
    CHECK(h.weight(100) == doctest::Approx(2.4938e-3).epsilon(1e-4));
    CHECK(h.weight(0) == doctest::Approx(0.99501).epsilon(1e-5));
}

TEST_CASE("Parseval on random specs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> k(0.0, 30.0), dm(0.2, 3.0), lam(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const CycleSpec s = spec(k(rng), dm(rng), lam(rng));
        const auto h = resolve_harmonics(s);
        CHECK(std::abs(total(h) - 1.0) < 1e-9);
        CHECK(h.tail_mass < 1e-6);
        for (double w : h.weights) CHECK(w >= 0.0);
    }
}

TEST_CASE("symmetric spectrum in the continuous and stroke limits") {
    for (double k : {0.0, 1e6}) {
        const auto h = resolve_harmonics(spec(k, 0.9, 0.3));
        for (int q = 1; q <= h.q_max; ++q) CHECK(std::abs(h.weight(q) - h.weight(-q)) < 1e-9);
    }
}

TEST_CASE("refinement stability") {
    const CycleSpec s = spec(2.0, 1.2, 0.1);
    const auto a = harmonic_weights(s, 256, 16384);
    const auto b = harmonic_weights(s, 256, 32768);
    for (int q = -256; q <= 256; ++q) CHECK(std::abs(a.weight(q) - b.weight(q)) < 1e-8);
}

TEST_CASE("aggressive truncation is reported") {
    const CycleSpec s = spec(100.0, 0.2, 0.1);
    CHECK_THROWS_AS((void)harmonic_weights(s, 2, 4096), TruncationError);
    CHECK_THROWS_AS((void)harmonic_weights(s, 0, 4096), std::invalid_argument);
    CHECK_THROWS_AS((void)harmonic_weights(s, 8, 3000), std::invalid_argument);
    const auto h = resolve_harmonics(s);
    CHECK(h.tail_mass < 1e-6);
}

TEST_CASE("hand-built lines") {
    const auto h = HarmonicDecomposition::from_lines(0.5, {{1, 0.25}, {-2, 0.75}});
    CHECK(h.q_max == 2);
    CHECK(h.weight(1) == 0.25);
    CHECK(h.weight(-2) == 0.75);
    CHECK(h.weight(0) == 0.0);
    CHECK(h.weight(7) == 0.0);
    CHECK(h.sideband_frequency(3.0, -2) == doctest::Approx(2.0));
}
