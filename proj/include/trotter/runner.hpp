#pragma once

#include <iosfwd>

#include "trotter/config.hpp"

namespace trotter {

/// Non-config failure during a run (I/O, numerics, missing artifacts); the
/// CLI maps it to exit code 3.
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trotterized-vs-exact trajectory of one initial state; writes
/// trajectory.csv and manifest.json into out_dir.
void run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Variational search; writes optimized_params.json, history.csv,
/// ladder.json, trajectory_optimized.csv, comparison.csv (optimized vs
/// random-product baseline vs the model reference state), and manifest.json.
void run_optimize(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Render one figure (echo | error | overlaps | bloch) from existing run
/// artifacts, emitting figure_<which>.svg plus the exact plotted data as
/// figure_<which>.csv. Never modifies existing numeric artifacts.
void run_figure(const RunConfig& cfg, const std::filesystem::path& out_dir,
                const std::string& which);

/// Quick invariant checks; prints one line per check, returns all-pass.
bool run_selftest(std::ostream& log);

}  // namespace trotter
