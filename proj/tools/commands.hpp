#pragma once

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace qhe::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kConvergence = 2, kIo = 3 };

// Each command writes CSV files into out_dir and a one-line summary per
// result to log. Errors propagate as exceptions; run() maps them to codes.

// timeseries.csv and summary.csv for one converged period.
void run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// sweep.csv over sweep.k_grid x sweep.delta_m_grid. Failed points are kept
// as rows with a status message. An empty grid is a ConfigError.
void run_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, int workers, std::ostream& log);

// speed_limit.csv, one row per speed_limit.k_grid value.
void run_speed_limit(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// beta_eff.csv over one period and tss.csv.
void run_diagnostics(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

// Full command line handling; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qhe::cli
