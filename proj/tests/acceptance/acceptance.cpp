// End-to-end criteria. Prints one PASS/FAIL line each; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qhe/analysis.hpp"

using namespace qhe;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

CycleSpec cycle(double k, double delta_m) {
    CycleSpec s;
    s.k = k;
    s.delta_m = delta_m;
    return s;
}

const BathSpec kWarm = BathSpec::flat(10.0, 30.0, 1.0, 3.0);
const BathSpec kWide = BathSpec::flat(1.0, 100.0, 1.0, 3.0);

CycleResult solve(const CycleSpec& s, const BathSpec& b) { return solve_cycle(RateContext::build(s, b)); }

// Linear interpolation of the first W sign change on a dense delta_m scan.
double work_zero(const BathSpec& b, double lo, double hi, double step) {
    double prev_dm = lo;
    double prev_w = solve(cycle(0.0, lo), b).power_avg;
    for (double dm = lo + step; dm <= hi + 1e-12; dm += step) {
        const double w = solve(cycle(0.0, dm), b).power_avg;
        if (prev_w < 0.0 && w >= 0.0) return prev_dm + (dm - prev_dm) * (-prev_w) / (w - prev_w);
        prev_dm = dm;
        prev_w = w;
    }
    return std::nan("");
}

Verdict critical_rate_crossing() {
    const double a = work_zero(kWarm, 1.3, 1.7, 0.01);
    const double b = work_zero(kWide, 2.7, 3.2, 0.01);
    const bool pass = std::abs(a - 1.5) <= 0.02 && std::abs(b - 2.9406) <= 0.03;
    return {pass, fmt("W=0 at delta_m=%.4f (T 10/30, want 1.5+-0.02), %.4f (T 1/100, want 2.9406+-0.03)", a, b)};
}

Verdict continuous_efficiency() {
    bool pass = true;
    std::string d;
    for (double dm : {0.5, 1.0, 2.0}) {
        const auto r = solve(cycle(0.0, dm), kWide);
        const double want = 2.0 * dm / (3.0 + dm);
        const double got = r.efficiency.value_or(std::nan(""));
        const bool ok = std::abs(got - want) <= 0.01 * want;
        pass = pass && ok;
        d += fmt("dm=%.1f eta=%.6f ref=%.6f; ", dm, got, want);
    }
    return {pass, d};
}

Verdict otto_efficiency() {
    bool pass = true;
    std::string d;
    for (double dm : {0.1, 0.2}) {
        const auto r = solve(cycle(100.0, dm), kWide);
        const double got = r.efficiency.value_or(std::nan(""));
        const bool ok = std::abs(got - 0.8) < 0.05;
        pass = pass && ok;
        d += fmt("k=100 dm=%.1f eta=%.6f (want 0.8+-0.05); ", dm, got);
    }
    return {pass, d};
}

// The k x delta_m grid shared by the Carnot and second-law criteria.
const std::vector<SweepPoint>& wide_sweep() {
    static const std::vector<SweepPoint> pts = [] {
        const SweepGrid grid{{0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}, {0.2, 0.5, 1.0, 1.2, 1.5, 2.0, 2.5}};
        return sweep(grid, CycleSpec{}, kWide, {}, workers());
    }();
    return pts;
}

Verdict carnot_bound() {
    const double carnot = 1.0 - kWide.t_cold / kWide.t_hot;
    int engines = 0, failed = 0;
    double worst = -1.0;
    for (const auto& p : wide_sweep()) {
        if (!p.ok()) {
            ++failed;
            continue;
        }
        if (p.result->efficiency) {
            ++engines;
            worst = std::max(worst, *p.result->efficiency);
        }
    }
    const bool pass = failed == 0 && engines > 0 && worst <= carnot + 1e-6;
    return {pass, fmt("%d engine points, max eta=%.6f, carnot=%.6f, %d failed points", engines, worst, carnot, failed)};
}

Verdict harmonic_weights_oracle() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> k(0.0, 50.0), dm(0.1, 3.0), lam(0.0, 1.0);
    double worst_sum = 0.0;
    for (int i = 0; i < 20; ++i) {
        CycleSpec s = cycle(k(rng), dm(rng));
        s.lambda = lam(rng);
        const auto h = resolve_harmonics(s);
        worst_sum = std::max(worst_sum, std::abs(h.retained_mass() + h.tail_mass - 1.0));
    }
    double worst_bessel = 0.0;
    for (double lambda : {0.1, 0.5, 1.0}) {
        CycleSpec s = cycle(0.0, 1.0);
        s.lambda = lambda;
        const auto h = resolve_harmonics(s);
        for (int q = -6; q <= 6; ++q) {
            const double j = oracle::bessel_j(q, lambda);
            worst_bessel = std::max(worst_bessel, std::abs(h.weight(q * s.phi()) - j * j));
        }
    }
    return {worst_sum < 1e-9 && worst_bessel < 1e-6,
            fmt("max |sum P - 1| = %.2e over 20 specs; max |P - J^2| = %.2e", worst_sum, worst_bessel)};
}

Verdict thermalization() {
    CycleSpec s = cycle(0.0, 1.0);
    s.lambda = 0.0;
    s.omega1 = s.omega2 = s.omega0;
    BathSpec hot;
    hot.t_cold = hot.t_hot = 30.0;
    hot.g_cold = 0.0;
    hot.separation_omega = 2.0;  // carrier in the hot band
    BathSpec cold;
    cold.t_cold = cold.t_hot = 10.0;
    cold.g_hot = 0.0;
    cold.separation_omega = 10.0;  // carrier in the cold band
    double worst = 0.0;
    std::string d;
    for (double k : {0.0, 2.0}) {
        s.k = k;
        for (const BathSpec& b : {hot, cold}) {
            const auto ctx = RateContext::build(s, b);
            const auto lc = find_limit_cycle(ctx, LadderState::geometric(150, 0.5));
            const double want = std::exp(-s.omega0 / b.t_hot);
            const double got = lc.state.populations[1] / lc.state.populations[0];
            worst = std::max(worst, std::abs(got - want));
            d += fmt("k=%g T=%g ratio=%.9f want=%.9f; ", k, b.t_hot, got, want);
        }
    }
    return {worst < 1e-6, d};
}

Verdict second_law() {
    double worst = -1e300;
    int n = 0;
    for (const auto& p : wide_sweep()) {
        if (!p.ok()) continue;
        ++n;
        worst = std::max(worst, p.result->j_hot_avg / kWide.t_hot + p.result->j_cold_avg / kWide.t_cold);
    }
    return {n > 0 && worst <= 1e-9, fmt("max J_h/T_h + J_c/T_c = %.3e over %d converged points", worst, n)};
}

Verdict hybrid_power() {
    const SweepGrid grid{{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 5.0, 20.0}, {1.2}};
    const auto pts = sweep(grid, CycleSpec{}, kWide, {}, workers());
    std::string d;
    double interior = 0.0;
    bool ok = true;
    for (const auto& p : pts) {
        ok = ok && p.ok();
        d += fmt("k=%g:%.4f ", p.k, p.scaled_power);
    }
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) interior = std::max(interior, pts[i].scaled_power);
    const bool pass = ok && interior > pts.front().scaled_power && interior > pts.back().scaled_power;
    return {pass, d};
}

Verdict speed_limit_monotone() {
    const double tol = 1e-3 * 3.0;
    std::vector<SpeedLimit> sl;
    std::string d;
    bool ok = true;
    for (double k : {0.0, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        try {
            sl.push_back(speed_limit(CycleSpec{}, kWide, k, {}));
            d += fmt("k=%g:%.4f(%s) ", k, sl.back().value, to_string(sl.back().status));
        } catch (const std::exception& e) {
            ok = false;
            d += fmt("k=%g:error ", k);
        }
    }
    if (!ok) return {false, d};
    bool monotone = true;
    for (std::size_t i = 1; i < sl.size(); ++i) monotone = monotone && sl[i].value <= sl[i - 1].value + tol;
    const bool at_cr = std::abs(sl[0].value - sl[0].critical) <= tol;
    return {monotone && at_cr, d + fmt("delta_cr=%.4f", sl[0].critical)};
}

Verdict beta_eff_traces() {
    const int samples = 4000;
    auto trace = [&](double k, int& undefined) {
        const auto ctx = RateContext::build(cycle(k, 1.4), kWide);
        std::vector<double> v;
        undefined = 0;
        for (int i = 0; i < samples; ++i) {
            const auto b = effective_inverse_temperature(ctx, ctx.cycle.tau_i() * i / samples);
            if (b.value) {
                v.push_back(*b.value);
            } else {
                ++undefined;
                v.push_back(std::nan(""));
            }
        }
        return v;
    };
    auto jump_ratio = [](const std::vector<double>& v) {
        double lo = 1e300, hi = -1e300, jump = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double a = v[i], b = v[(i + 1) % v.size()];
            if (std::isnan(a) || std::isnan(b)) continue;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            jump = std::max(jump, std::abs(b - a));
        }
        return hi > lo ? jump / (hi - lo) : 0.0;
    };
    int undef1 = 0, undef20 = 0;
    const auto t1 = trace(1.0, undef1);
    const auto t20 = trace(20.0, undef20);
    const double j1 = jump_ratio(t1), j20 = jump_ratio(t20);
    const bool pass = undef1 == 0 && j1 < 0.05 && (undef20 > 0 || j20 >= 0.05);
    return {pass, fmt("k=1: max jump %.4f of range, %d undefined; k=20: max jump %.4f, %d of %d undefined", j1,
                      undef1, j20, undef20, samples)};
}

Verdict dense_oracle() {
    double worst = 0.0;
    std::string d;
    struct Case {
        double k;
        int n_max;
        std::vector<std::pair<int, double>> lines;
    };
    for (const Case& c : {Case{1.0, 3, {{1, 0.5}, {-1, 0.5}}}, Case{2.0, 4, {{3, 0.7}}}, Case{0.5, 2, {{2, 0.4}, {-3, 0.6}}}}) {
        CycleSpec s = cycle(c.k, 1.2);
        const BathSpec b = BathSpec::flat(1.0, 5.0, 0.05, s.omega0);
        const double dq = s.delta_i();
        const RateContext ctx{s, b, HarmonicDecomposition::from_lines(dq, c.lines)};
        std::vector<oracle::Line> lines;
        for (const auto& [q, w] : c.lines) {
            const Bath j = q > 0 ? Bath::hot : Bath::cold;
            lines.push_back({s.omega0 + q * dq, w, 0.05, b.temperature(j), [s, j](double t) { return coupling(s, j, t); }});
        }
        LadderState st = LadderState::geometric(c.n_max, 0.3);
        Eigen::VectorXd p0 = Eigen::Map<Eigen::VectorXd>(st.populations.data(), c.n_max + 1);
        const auto got = integrate_cycle(LadderGenerator(ctx, c.n_max), st, {20000, 0.5});
        const Eigen::VectorXd coarse = oracle::propagate(c.n_max, lines, p0, s.tau_i(), 4000);
        const Eigen::VectorXd fine = oracle::propagate(c.n_max, lines, p0, s.tau_i(), 8000);
        const Eigen::VectorXd want = (4.0 * fine - coarse) / 3.0;
        double err = 0.0;
        for (int n = 0; n <= c.n_max; ++n) err = std::max(err, std::abs(got.populations[n] - want(n)));
        worst = std::max(worst, err);
        d += fmt("k=%g N=%d err=%.2e; ", c.k, c.n_max, err);
    }
    return {worst < 1e-6, d};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"critical rate", critical_rate_crossing},
        {"continuous-cycle efficiency", continuous_efficiency},
        {"stroke-limit efficiency", otto_efficiency},
        {"Carnot bound", carnot_bound},
        {"harmonic weights", harmonic_weights_oracle},
        {"single-bath thermalization", thermalization},
        {"second law", second_law},
        {"hybrid power maximum", hybrid_power},
        {"speed-limit monotonicity", speed_limit_monotone},
        {"effective temperature traces", beta_eff_traces},
        {"dense propagation oracle", dense_oracle},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !v.pass;
        std::printf("%s [%zu] %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
