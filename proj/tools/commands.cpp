#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace qhe::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

// Keeps free text inside one CSV field.
std::string field(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

class CsvFile {
public:
    explicit CsvFile(const fs::path& path) : path_(path), out_(path) {
        if (!out_) throw IoError("cannot write " + path.string());
    }

    void comment(const std::string& line) { out_ << "# " << line << '\n'; }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (out_.fail()) throw IoError("failed writing " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream out_;
};

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void parameter_comments(CsvFile& f, const RunConfig& cfg) {
    const auto& c = cfg.cycle;
    const auto& b = cfg.baths;
    f.comment("cycle: k=" + num(c.k) + " delta_m=" + num(c.delta_m) + " lambda=" + num(c.lambda) +
              " omega0=" + num(c.omega0) + " omega1=" + num(c.omega1) + " omega2=" + num(c.omega2) +
              " n1=" + std::to_string(c.n1) + " n2=" + std::to_string(c.n2));
    f.comment("baths: t_cold=" + num(b.t_cold) + " t_hot=" + num(b.t_hot) + " g_cold=" + num(b.g_cold) +
              " g_hot=" + num(b.g_hot) + " separation_omega=" + num(b.separation_omega));
}

const char* kCurrentUnits =
    "J_h, J_c: heat flow out of each bath [energy/time]; W_dot = -(J_h + J_c), negative when work is produced";

}  // namespace

void run_simulate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    prepare_dir(out_dir);
    const RateContext ctx = RateContext::build(cfg.cycle, cfg.baths, cfg.solver.harmonics);
    CycleTrace trace;
    LimitCycle limit;
    const CycleResult r = solve_cycle(ctx, cfg.solver.limit_cycle, cfg.solver.n_max, &trace, &limit);
    const double dw = max_modulation_amplitude(cfg.cycle);

    CsvFile ts(out_dir / "timeseries.csv");
    ts.comment("one period of the converged limit cycle on the integrator grid");
    parameter_comments(ts, cfg);
    ts.comment("t [time], omega [angular frequency], f_c, f_h [dimensionless]");
    ts.comment(kCurrentUnits);
    ts.comment("beta_eff [1/energy], nan where the instantaneous steady state is ill-defined");
    ts.row({"t", "omega", "f_c", "f_h", "J_h", "J_c", "W_dot", "beta_eff"});
    const LadderGenerator probe(ctx, 1);
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double t = trace.times[i];
        const double jh = trace.j_hot[i];
        const double jc = trace.j_cold[i];
        ts.row({num(t), num(omega(cfg.cycle, t)), num(coupling(cfg.cycle, Bath::cold, t)),
                num(coupling(cfg.cycle, Bath::hot, t)), num(jh), num(jc), num(-(jh + jc)),
                opt_num(effective_inverse_temperature(probe, t).value)});
    }
    ts.close();

    CsvFile sum(out_dir / "summary.csv");
    sum.comment("cycle averages over one period (trapezoid rule on the timeseries grid)");
    parameter_comments(sum, cfg);
    sum.comment(kCurrentUnits);
    sum.comment("efficiency = -W_dot / J_h, nan outside the heat-engine regime");
    sum.comment("delta_omega_max [angular frequency]: max |omega - omega0|; scaled_power = |W_dot| / delta_omega_max");
    sum.row({"k", "delta_m", "regime", "J_h", "J_c", "W_dot", "efficiency", "cycles", "residual", "n_max",
             "steps", "delta_omega_max", "scaled_power"});
    sum.row({num(cfg.cycle.k), num(cfg.cycle.delta_m), to_string(r.regime), num(r.j_hot_avg), num(r.j_cold_avg),
             num(r.power_avg), opt_num(r.efficiency), std::to_string(r.cycles_to_converge), num(r.residual),
             std::to_string(r.n_max), std::to_string(r.steps), num(dw),
             num(dw > 0.0 ? std::abs(r.power_avg) / dw : 0.0)});
    sum.close();

    log << "simulate: regime=" << to_string(r.regime) << " W_dot=" << num(r.power_avg)
        << " efficiency=" << opt_num(r.efficiency) << " cycles=" << r.cycles_to_converge << '\n';
}

void run_sweep(const RunConfig& cfg, const fs::path& out_dir, int workers, std::ostream& log) {
    SweepGrid grid;
    grid.k_values = cfg.sweep_k;
    grid.delta_m_values = cfg.sweep_delta_m;
    if (grid.size() == 0) throw ConfigError("sweep: empty grid");
    prepare_dir(out_dir);
    const auto points = sweep(grid, cfg.cycle, cfg.baths, cfg.solver, workers);

    CsvFile f(out_dir / "sweep.csv");
    f.comment("cycle averages over a (k, delta_m) grid, k-major");
    parameter_comments(f, cfg);
    f.comment("k [dimensionless], delta_m [angular frequency]");
    f.comment(kCurrentUnits);
    f.comment("efficiency nan outside the heat-engine regime; scaled_power = |W_dot| / delta_omega_max");
    f.row({"k", "delta_m", "regime", "J_h", "J_c", "W_dot", "efficiency", "delta_omega_max", "scaled_power",
           "cycles", "residual", "n_max", "status"});
    int failed = 0;
    for (const auto& p : points) {
        if (p.ok()) {
            const auto& r = *p.result;
            f.row({num(p.k), num(p.delta_m), to_string(r.regime), num(r.j_hot_avg), num(r.j_cold_avg),
                   num(r.power_avg), opt_num(r.efficiency), num(p.delta_omega_max), num(p.scaled_power),
                   std::to_string(r.cycles_to_converge), num(r.residual), std::to_string(r.n_max), "ok"});
        } else {
            ++failed;
            f.row({num(p.k), num(p.delta_m), "none", "nan", "nan", "nan", "nan", num(p.delta_omega_max), "nan",
                   "0", "nan", "0", field("error: " + p.error)});
        }
    }
    f.close();
    log << "sweep: " << points.size() << " points, " << failed << " failed\n";
}

void run_speed_limit(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    prepare_dir(out_dir);
    const double dcr = critical_rate(cfg.baths, cfg.cycle.omega0);

    CsvFile f(out_dir / "speed_limit.csv");
    f.comment("largest modulation rate with net work output, per smoothness k");
    parameter_comments(f, cfg);
    f.comment("delta_sl, delta_cr [angular frequency]; delta_cr = omega0 (T_h - T_c) / (T_h + T_c)");
    f.comment("status: crossing | at_critical (engine up to delta_cr) | no_heat_engine | error");
    f.row({"k", "delta_sl", "delta_cr", "status", "evaluations"});
    for (double k : cfg.speed_limit_k) {
        try {
            const SpeedLimit sl = speed_limit(cfg.cycle, cfg.baths, k, cfg.solver, cfg.speed_limit);
            f.row({num(k), num(sl.value), num(dcr), to_string(sl.status), std::to_string(sl.evaluations)});
            log << "speed-limit: k=" << num(k) << " delta_sl=" << num(sl.value) << ' ' << to_string(sl.status)
                << '\n';
        } catch (const NoHeatEngineError&) {
            f.row({num(k), "nan", num(dcr), "no_heat_engine", "0"});
            log << "speed-limit: k=" << num(k) << " no heat engine\n";
        } catch (const std::exception& e) {
            f.row({num(k), "nan", num(dcr), field(std::string("error: ") + e.what()), "0"});
            log << "speed-limit: k=" << num(k) << " error: " << e.what() << '\n';
        }
    }
    f.close();
}

void run_diagnostics(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
    prepare_dir(out_dir);
    const RateContext ctx = RateContext::build(cfg.cycle, cfg.baths, cfg.solver.harmonics);
    const LadderGenerator probe(ctx, 1);
    const double period = cfg.cycle.tau_i();

    CsvFile b(out_dir / "beta_eff.csv");
    b.comment("effective inverse temperature of the instantaneous steady state over one period");
    parameter_comments(b, cfg);
    b.comment("t [time], f_c, f_h [dimensionless], beta_eff [1/energy], beta_ratio = beta_eff * T_c");
    b.row({"t", "f_c", "f_h", "beta_eff", "beta_ratio", "status"});
    int undefined = 0;
    for (int i = 0; i < cfg.diagnostics_samples; ++i) {
        const double t = period * i / cfg.diagnostics_samples;
        const InverseTemperature beta = effective_inverse_temperature(probe, t);
        if (!beta.value) ++undefined;
        b.row({num(t), num(coupling(cfg.cycle, Bath::cold, t)), num(coupling(cfg.cycle, Bath::hot, t)),
               opt_num(beta.value), beta.value ? num(*beta.value * cfg.baths.t_cold) : "nan",
               beta.value ? "ok" : field("ill_defined: " + beta.reason)});
    }
    b.close();

    const TssTimescale tss = tss_timescale(ctx, cfg.tss_delta_t, cfg.tss_grid, cfg.solver.n_max);
    CsvFile t(out_dir / "tss.csv");
    t.comment("time scale on which the instantaneous steady state can be tracked");
    parameter_comments(t, cfg);
    t.comment("delta_t, tau_tss [time]; rate_scale = tau_tss * delta_t / (4 pi) [time^2]");
    t.comment("coupling_factor: max |f_c f_h (f_c - f_h)| / (f_c^2 + f_h^2)^2; max_curvature: max |d^2 P1/dt^2|");
    t.row({"k", "delta_t", "tau_tss", "rate_scale", "coupling_factor", "max_curvature", "status"});
    t.row({num(cfg.cycle.k), num(tss.delta_t), tss.defined ? num(tss.value) : "nan",
           tss.defined ? num(tss.rate_scale) : "nan", num(tss.coupling_factor), num(tss.max_curvature),
           tss.defined ? "ok" : field("ill_defined: " + tss.reason)});
    t.close();

    log << "diagnostics: " << undefined << " of " << cfg.diagnostics_samples
        << " beta_eff samples ill-defined; tau_tss=" << (tss.defined ? num(tss.value) : "nan") << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodically driven quantum heat engine simulator"};
    app.require_subcommand(0, 1);

    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

    std::string config_path;
    std::string out_override;
    int workers = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "INI configuration file")->required();
        sub->add_option("-o,--out", out_override, "Output directory (overrides [output] dir)");
    };
    auto* simulate = app.add_subcommand("simulate", "Converged limit cycle for one parameter set");
    auto* sweep_cmd = app.add_subcommand("sweep", "Cycle averages over a (k, delta_m) grid");
    auto* speed = app.add_subcommand("speed-limit", "Speed limit per smoothness value");
    auto* diag = app.add_subcommand("diagnostics", "Effective temperature trace and tracking time scale");
    for (auto* s : {simulate, sweep_cmd, speed, diag}) add_common(s);
    sweep_cmd->add_option("-j,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    if (print_defaults) {
        out << default_config_text();
        return kOk;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return kValidation;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        const fs::path dir = out_override.empty() ? fs::path(cfg.out_dir) : fs::path(out_override);
        if (simulate->parsed()) run_simulate(cfg, dir, out);
        if (sweep_cmd->parsed()) run_sweep(cfg, dir, workers, out);
        if (speed->parsed()) run_speed_limit(cfg, dir, out);
        if (diag->parsed()) run_diagnostics(cfg, dir, out);
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConfigError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kValidation;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kValidation;
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const TruncationError& e) {
        err << "convergence failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const StepSizeError& e) {
        err << "convergence failure: " << e.what() << '\n';
        return kConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConvergence;
    }
}

}  // namespace qhe::cli
