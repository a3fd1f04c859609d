#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace qhe::cli {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "otto") return kOttoSmoothness;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + raw + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + raw + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_double(v[i]);
    }
    return s;
}

struct Key {
    const char* section;
    const char* name;
    const char* doc;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

#define QHE_DOUBLE(sec, nm, field, doc)                                          \
    Key {                                                                        \
        sec, nm, doc, [](const RunConfig& c) { return format_double(c.field); }, \
            [](RunConfig& c, const std::string& v) { c.field = parse_double(sec "." nm, v); } \
    }
#define QHE_INT(sec, nm, field, doc)                                                   \
    Key {                                                                              \
        sec, nm, doc, [](const RunConfig& c) { return std::to_string(c.field); },      \
            [](RunConfig& c, const std::string& v) { c.field = parse_int(sec "." nm, v); } \
    }
#define QHE_LIST(sec, nm, field, doc)                                              \
    Key {                                                                          \
        sec, nm, doc, [](const RunConfig& c) { return format_list(c.field); },     \
            [](RunConfig& c, const std::string& v) { c.field = parse_list(sec "." nm, v); } \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        Key{"cycle", "k", "smoothness: 0 continuous, large (or 'otto') stroke-like",
            [](const RunConfig& c) { return format_double(c.cycle.k); },
            [](RunConfig& c, const std::string& v) { c.cycle.k = parse_double("cycle.k", v); }},
        QHE_DOUBLE("cycle", "delta_m", cycle.delta_m, "level modulation rate [angular frequency]"),
        QHE_DOUBLE("cycle", "lambda", cycle.lambda, "sinusoidal modulation depth [dimensionless]"),
        QHE_DOUBLE("cycle", "omega0", cycle.omega0, "mean level spacing [angular frequency]"),
        QHE_DOUBLE("cycle", "omega1", cycle.omega1, "low stroke spacing [angular frequency]"),
        QHE_DOUBLE("cycle", "omega2", cycle.omega2, "high stroke spacing [angular frequency]"),
        QHE_INT("cycle", "n1", cycle.n1, "period ratio numerator offset"),
        QHE_INT("cycle", "n2", cycle.n2, "period ratio denominator offset"),
        QHE_DOUBLE("baths", "t_cold", baths.t_cold, "cold bath temperature [energy]"),
        QHE_DOUBLE("baths", "t_hot", baths.t_hot, "hot bath temperature [energy]"),
        Key{"baths", "g0", "flat band amplitude of both baths [rate]",
            [](const RunConfig& c) { return format_double(c.baths.g_cold); },
            [](RunConfig& c, const std::string& v) { c.baths.g_cold = c.baths.g_hot = parse_double("baths.g0", v); }},
        QHE_DOUBLE("baths", "g_cold", baths.g_cold, "cold band amplitude, overrides g0 [rate]"),
        QHE_DOUBLE("baths", "g_hot", baths.g_hot, "hot band amplitude, overrides g0 [rate]"),
        Key{"baths", "separation_omega", "band edge between cold and hot support; defaults to omega0",
            [](const RunConfig& c) { return format_double(c.separation_set ? c.baths.separation_omega : c.cycle.omega0); },
            [](RunConfig& c, const std::string& v) {
                c.baths.separation_omega = parse_double("baths.separation_omega", v);
                c.separation_set = true;
            }},
        QHE_INT("numerics", "n_max", solver.n_max, "initial ladder truncation (doubled on demand)"),
        QHE_INT("numerics", "q_max", solver.harmonics.q_max, "initial sideband cutoff (doubled on demand)"),
        QHE_INT("numerics", "n_samples", solver.harmonics.n_samples, "Fourier samples per period, power of two"),
        QHE_DOUBLE("numerics", "harmonic_tail", solver.harmonics.tail_tolerance, "allowed sideband weight beyond q_max"),
        QHE_INT("numerics", "steps_per_cycle", solver.limit_cycle.integration.steps_per_cycle,
                "minimum RK4 steps per period"),
        QHE_DOUBLE("numerics", "stability_factor", solver.limit_cycle.integration.stability_factor,
                   "max dt * generator rate bound"),
        QHE_DOUBLE("numerics", "limit_cycle_tol", solver.limit_cycle.tolerance, "stroboscopic max-norm tolerance"),
        QHE_INT("numerics", "max_cycles", solver.limit_cycle.max_cycles, "limit-cycle iteration cap"),
        QHE_DOUBLE("numerics", "ladder_tail", solver.limit_cycle.tail_tolerance, "allowed top-level population"),
        QHE_LIST("sweep", "k_grid", sweep_k, "smoothness values (cycle.k is ignored by sweep)"),
        QHE_LIST("sweep", "delta_m_grid", sweep_delta_m, "modulation rates (cycle.delta_m is ignored by sweep)"),
        QHE_LIST("speed_limit", "k_grid", speed_limit_k, "smoothness values to bisect"),
        QHE_INT("speed_limit", "scan_points", speed_limit.scan_points, "coarse scan points before bisection"),
        QHE_DOUBLE("speed_limit", "tolerance", speed_limit.tolerance, "bisection tolerance as a fraction of omega0"),
        QHE_INT("diagnostics", "samples", diagnostics_samples, "beta_eff samples per period"),
        QHE_DOUBLE("diagnostics", "tss_delta_t", tss_delta_t, "finite-difference step; 0 means tau_I/1000"),
        QHE_INT("diagnostics", "tss_grid", tss_grid, "time grid for the tss coupling factor"),
        Key{"output", "dir", "output directory (overridden by --out)",
            [](const RunConfig& c) { return c.out_dir; },
            [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); }},
    };
    return table;
}

#undef QHE_DOUBLE
#undef QHE_INT
#undef QHE_LIST

}  // namespace

void RunConfig::validate() const {
    try {
        cycle.validate();
        baths.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (solver.n_max < 1) throw ConfigError("config: numerics.n_max must be >= 1");
    if (solver.limit_cycle.integration.steps_per_cycle < 1000) {
        throw ConfigError("config: numerics.steps_per_cycle must be >= 1000");
    }
    if (!(solver.limit_cycle.integration.stability_factor > 0.0)) {
        throw ConfigError("config: numerics.stability_factor must be positive");
    }
    if (!(solver.limit_cycle.tolerance > 0.0)) throw ConfigError("config: numerics.limit_cycle_tol must be positive");
    if (solver.limit_cycle.max_cycles < 1) throw ConfigError("config: numerics.max_cycles must be >= 1");
    const int ns = solver.harmonics.n_samples;
    if (ns < 4096 || (ns & (ns - 1)) != 0) throw ConfigError("config: numerics.n_samples must be a power of two >= 4096");
    if (solver.harmonics.q_max < 1) throw ConfigError("config: numerics.q_max must be >= 1");
    for (double k : sweep_k) {
        if (!(k >= 0.0)) throw ConfigError("config: sweep.k_grid values must be >= 0");
    }
    for (double d : sweep_delta_m) {
        if (!(d > 0.0)) throw ConfigError("config: sweep.delta_m_grid values must be positive");
    }
    for (double k : speed_limit_k) {
        if (!(k >= 0.0)) throw ConfigError("config: speed_limit.k_grid values must be >= 0");
    }
    if (speed_limit.scan_points < 2) throw ConfigError("config: speed_limit.scan_points must be >= 2");
    if (!(speed_limit.tolerance > 0.0)) throw ConfigError("config: speed_limit.tolerance must be positive");
    if (tss_grid < 16) throw ConfigError("config: diagnostics.tss_grid must be >= 16");
    if (diagnostics_samples < 2) throw ConfigError("config: diagnostics.samples must be >= 2");
}

RunConfig parse_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("config: key '" + section + "' outside of a section");
        for (const auto& [name, value] : body) {
            const Key* match = nullptr;
            for (const auto& k : keys()) {
                if (section == k.section && name == k.name) match = &k;
            }
            if (!match) throw ConfigError("config: unknown key '" + section + "." + name + "'");
            match->set(cfg, value.data());
        }
    }
    if (!cfg.separation_set) cfg.baths.separation_omega = cfg.cycle.omega0;
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    return parse_config(in);
}

std::string default_config_text() {
    const RunConfig defaults;
    std::ostringstream os;
    os << "; qhe configuration (defaults)\n";
    std::string current;
    for (const auto& k : keys()) {
        if (current != k.section) {
            current = k.section;
            os << "\n[" << current << "]\n";
        }
        // g_cold/g_hot duplicate g0 by default; keep them commented out.
        const std::string name = k.name;
        const bool optional = (name == "g_cold" || name == "g_hot");
        os << "; " << k.doc << "\n" << (optional ? "; " : "") << name << " = " << k.get(defaults) << "\n";
    }
    return os.str();
}

}  // namespace qhe::cli
