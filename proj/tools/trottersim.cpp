#include <CLI11.hpp>

#include <omp.h>

#include <iostream>

#include "trotter/runner.hpp"
#include "trotter/version.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    long long seed_override = -1;
    int jobs = 0;
};

trotter::RunConfig load_config(const CommonOpts& opts) {
    trotter::RunConfig cfg = trotter::RunConfig::parse_file(opts.config_path);
    if (opts.seed_override >= 0) cfg.seed = std::uint64_t(opts.seed_override);
    return cfg;
}

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_override, "output directory (overrides config)");
    sub->add_option("--seed", opts.seed_override, "seed override");
    sub->add_option("--jobs", opts.jobs, "worker threads for restarts/ensembles");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trotterized spin-chain dynamics, spectral error prediction, and variational "
                 "search for error-resilient initial states"};
    app.set_version_flag("--version", trotter::VERSION);
    app.require_subcommand(1);

    CommonOpts opts;
    std::string which = "echo";

    CLI::App* simulate = app.add_subcommand("simulate", "run one Trotterized trajectory");
    add_common(simulate, opts);
    CLI::App* optimize = app.add_subcommand("optimize", "variationally search for a low-error state");
    add_common(optimize, opts);
    CLI::App* figure = app.add_subcommand("figure", "render a figure from run artifacts");
    add_common(figure, opts);
    figure->add_option("--which", which, "echo | error | overlaps | bloch");
    CLI::App* selftest = app.add_subcommand("selftest", "run quick built-in invariant checks");
    selftest->add_option("--jobs", opts.jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (opts.jobs > 0) omp_set_num_threads(opts.jobs);

    try {
        if (selftest->parsed()) return trotter::run_selftest(std::cout) ? 0 : 3;

        const trotter::RunConfig cfg = load_config(opts);
        const std::filesystem::path out_dir =
            opts.out_override.empty() ? cfg.out_dir : opts.out_override;
        if (simulate->parsed()) {
            trotter::run_simulate(cfg, out_dir);
            std::cout << "simulate: artifacts written to " << out_dir.string() << "\n";
        } else if (optimize->parsed()) {
            trotter::run_optimize(cfg, out_dir);
            std::cout << "optimize: artifacts written to " << out_dir.string() << "\n";
        } else if (figure->parsed()) {
            trotter::run_figure(cfg, out_dir, which);
            std::cout << "figure: wrote figure_" << which << ".{svg,csv} in " << out_dir.string()
                      << "\n";
        }
    } catch (const trotter::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
