#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "trotter/models.hpp"
#include "trotter/variational.hpp"

namespace trotter {

/// Raised for malformed or invalid configs; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One experiment, parsed from a single sectioned key=value file. Unknown
/// sections or keys are rejected with the offending line number.
struct RunConfig {
    // [model]
    std::string model_name = "heisenberg";
    int L = 12;
    std::map<std::string, double> model_params;  // defaults filled per model

    // [trotter]
    int order = 2;
    double dt = 0.01;
    double t_max = 20.0;
    int record_stride = 1;

    // [initial]
    std::string initial_type = "random";  // random | neel | zeros | product | ladder
    std::vector<double> initial_theta;
    std::vector<double> initial_phi;
    double ladder_tol = 0.02;
    int ladder_members = 5;

    // [optimize]
    double l1 = 1.0;
    double l2 = 1e-5;
    double t_l = 10.0;
    int iters = 2000;
    double lr0 = 0.05;
    double lr_min = 1e-4;
    int restarts = 8;

    // [output]
    std::vector<int> tracked_sites;  // default: site 11 at L = 12, else L - 1
    int baseline_count = 100;
    bool predicted_error = true;

    // [run]
    std::uint64_t seed = 1;
    std::string out_dir = "run";

    void validate() const;
    SplitHamiltonian build() const;
    LossConfig loss_config() const;
    AdamConfig adam_config() const;
    std::vector<int> effective_tracked_sites() const;

    /// Canonical config text; parse(serialize()) reproduces the config.
    std::string serialize() const;

    static RunConfig parse_string(const std::string& text, const std::string& origin = "<string>");
    static RunConfig parse_file(const std::filesystem::path& path);
};

}  // namespace trotter
