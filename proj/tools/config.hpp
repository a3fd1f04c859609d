#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhe/analysis.hpp"

namespace qhe::cli {

// Bad configuration value, unknown key, or physics invariant violated.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    CycleSpec cycle;
    BathSpec baths;
    bool separation_set = false;  // otherwise separation_omega follows omega0
    SolverOptions solver;

    std::vector<double> sweep_k = {0.0, 1.0, 2.0, 5.0, 20.0};
    std::vector<double> sweep_delta_m = {1.2};

    std::vector<double> speed_limit_k = {0.0, 1.0, 2.0, 5.0, 20.0, 100.0};
    SpeedLimitOptions speed_limit;

    int diagnostics_samples = 1000;
    double tss_delta_t = 0.0;
    int tss_grid = 2048;

    std::string out_dir = "out";

    // Re-checks every physical invariant; throws ConfigError.
    void validate() const;
};

// Parses the INI-style text. Every key must be known; missing keys keep
// their defaults. Throws ConfigError.
[[nodiscard]] RunConfig parse_config(std::istream& in);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

// Fully commented default configuration, loadable by parse_config.
[[nodiscard]] std::string default_config_text();

}  // namespace qhe::cli
