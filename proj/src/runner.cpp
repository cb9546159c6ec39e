#include "trotter/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "trotter/io.hpp"
#include "trotter/kernels.hpp"
#include "trotter/svg.hpp"
#include "trotter/version.hpp"

namespace trotter {

namespace {

using nlohmann::json;
using io::CsvData;

constexpr std::uint64_t BASELINE_SEED_MIX = 0xC2B2AE3D27D4EB4FULL;

StateVector neel_state(int L) {
    std::vector<int> bits(static_cast<size_t>(L));
    for (int j = 0; j < L; ++j) bits[size_t(j)] = (j % 2 == 0) ? 1 : 0;
    return StateVector::basis_state(L, bits);
}

StateVector initial_state(const RunConfig& cfg, const SplitHamiltonian& ham,
                          const SpectralDecomposition& spec) {
    auto make = [&]() -> StateVector {
        if (cfg.initial_type == "random") return haar_random_product_state(cfg.L, cfg.seed);
        if (cfg.initial_type == "zeros") return StateVector::zero_state(cfg.L);
        if (cfg.initial_type == "neel") return neel_state(cfg.L);
        if (cfg.initial_type == "product") {
            VariationalParameters params{
                Eigen::Map<const RVec>(cfg.initial_theta.data(), long(cfg.initial_theta.size())),
                Eigen::Map<const RVec>(cfg.initial_phi.data(), long(cfg.initial_phi.size()))};
            return prepare_product_state(params);
        }
        if (cfg.initial_type == "ladder") {
            if (ham.model_spec.omega <= 0.0)
                throw RunError("ladder initial state needs a model with a ladder frequency");
            return commensurate_ladder_state(spec, ham.model_spec.omega, cfg.ladder_tol,
                                             cfg.ladder_members);
        }
        throw RunError("unhandled initial state type");
    };
    StateVector psi = make();
    psi.require_normalized();
    return psi;
}

json model_json(const SplitHamiltonian& ham) {
    json j;
    j["name"] = ham.model_spec.name;
    j["params"] = ham.model_spec.params;
    j["omega"] = ham.model_spec.omega;
    j["omega_validity"] = ham.model_spec.omega_validity;
    if (ham.model_spec.omega > 0.0) {
        std::vector<double> strobes;
        for (int p = 1; p <= 5; ++p) strobes.push_back(ham.model_spec.strobe_time(p));
        j["strobe_times"] = strobes;
    }
    return j;
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec) {
    std::vector<std::string> columns = {"time", "loschmidt_exact", "loschmidt_trotter",
                                        "trotter_error", "predicted_error"};
    for (int site : rec.tracked_sites) {
        const std::string base = "bloch" + std::to_string(site) + "_";
        columns.push_back(base + "x");
        columns.push_back(base + "y");
        columns.push_back(base + "z");
    }
    std::vector<std::vector<std::optional<double>>> rows;
    for (size_t i = 0; i < rec.times.size(); ++i) {
        std::vector<std::optional<double>> row = {rec.times[i], rec.loschmidt_exact[i],
                                                  rec.loschmidt_trotter[i], rec.trotter_error[i]};
        if (rec.predicted_error.empty())
            row.emplace_back(std::nullopt);
        else
            row.emplace_back(rec.predicted_error[i]);
        for (size_t s = 0; s < rec.tracked_sites.size(); ++s)
            for (double v : rec.bloch[s][i]) row.emplace_back(v);
        rows.push_back(std::move(row));
    }
    io::write_csv(path, "trajectory-v1", columns, rows);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw RunError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json hash_artifacts(const std::filesystem::path& dir, const std::vector<std::string>& names) {
    json hashes;
    for (const std::string& name : names) hashes[name] = io::sha256_file(dir / name);
    return hashes;
}

json manifest_skeleton(const RunConfig& cfg, const SplitHamiltonian& ham,
                       const std::string& command) {
    json m;
    m["schema"] = "manifest-v1";
    m["command"] = command;
    m["library_version"] = VERSION;
    m["seed"] = cfg.seed;
    m["config"] = cfg.serialize();
    m["model"] = model_json(ham);
    return m;
}

const ErrorKernel* maybe_kernel(const RunConfig& cfg, const SplitHamiltonian& ham,
                                ErrorKernel& storage) {
    if (!cfg.predicted_error) return nullptr;
    if (cfg.order != 1 && cfg.order != 2 && cfg.order != 4) return nullptr;
    storage = error_kernel(ham, cfg.order);
    return &storage;
}

CsvData require_csv(const std::filesystem::path& dir, const std::string& name) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) throw RunError("missing artifact: " + path.string());
    return io::read_csv(path);
}

std::vector<double> csv_column(const CsvData& data, const std::string& name) {
    const int c = data.column(name);
    if (c < 0) throw RunError("column " + name + " missing from csv");
    std::vector<double> out;
    for (const auto& row : data.rows)
        out.push_back(row[size_t(c)] ? *row[size_t(c)] : std::nan(""));
    return out;
}

}  // namespace

void run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    const SplitHamiltonian ham = cfg.build();
    const SpectralDecomposition spec = eigendecompose_hermitian(ham.full_matrix());
    const StateVector psi0 = initial_state(cfg, ham, spec);

    ErrorKernel kernel_storage;
    const ErrorKernel* kernel = maybe_kernel(cfg, ham, kernel_storage);

    const int n_steps = int(std::lround(cfg.t_max / cfg.dt));
    const auto rec =
        record_trajectory(ham, schedule_for_order(cfg.order), cfg.dt, n_steps, cfg.record_stride,
                          psi0, spec, kernel, cfg.effective_tracked_sites());
    write_trajectory_csv(out_dir / "trajectory.csv", rec);

    json manifest = manifest_skeleton(cfg, ham, "simulate");
    manifest["n_steps"] = n_steps;
    manifest["tracked_sites"] = cfg.effective_tracked_sites();
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest["artifacts"] = hash_artifacts(out_dir, {"trajectory.csv"});
    write_json_file(out_dir / "manifest.json", manifest);
}

void run_optimize(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    const SplitHamiltonian ham = cfg.build();
    const auto [best, history] = optimize(ham, cfg.loss_config(), cfg.adam_config());
    const LossEvaluator evaluator(ham, cfg.loss_config());
    const SpectralDecomposition& spec = evaluator.hamiltonian_spectrum();
    const LossBreakdown final_loss = evaluator.loss(best);
    const StateVector psi_opt = prepare_product_state(best);

    json params_json;
    params_json["schema"] = "optimized-params-v1";
    params_json["theta"] = std::vector<double>(best.theta.data(), best.theta.data() + cfg.L);
    params_json["phi"] = std::vector<double>(best.phi.data(), best.phi.data() + cfg.L);
    params_json["loss"] = {{"total", final_loss.total},
                           {"error_term", final_loss.error_term},
                           {"echo_term", final_loss.echo_term}};
    params_json["winning_restart"] = history.winning_restart;
    params_json["restart_best_losses"] = history.restart_best_losses;
    params_json["diagnostics"] = history.diagnostics;
    write_json_file(out_dir / "optimized_params.json", params_json);

    {
        std::vector<std::vector<std::optional<double>>> rows;
        for (size_t i = 0; i < history.entries.size(); ++i) {
            const auto& e = history.entries[i];
            rows.push_back({double(i), e.loss, e.error_term, e.echo_term, e.lr});
        }
        io::write_csv(out_dir / "history.csv", "history-v1",
                      {"iter", "loss", "error_term", "echo_term", "lr"}, rows);
    }

    const LadderReport report = ladder_report(spec, psi_opt);
    {
        json j;
        j["schema"] = "ladder-v1";
        j["omega_defined"] = report.omega_defined;
        j["omega"] = report.omega;
        j["strobe_times"] = report.strobe_times;
        j["residual"] = report.residual;
        json overlaps = json::array();
        for (const auto& [e, w] : report.top_overlaps) overlaps.push_back({e, w});
        j["top_overlaps"] = overlaps;
        write_json_file(out_dir / "ladder.json", j);
    }

    ErrorKernel kernel_storage;
    const ErrorKernel* kernel = maybe_kernel(cfg, ham, kernel_storage);
    const int n_steps = int(std::lround(cfg.t_max / cfg.dt));
    const auto rec_opt =
        record_trajectory(ham, schedule_for_order(cfg.order), cfg.dt, n_steps, cfg.record_stride,
                          psi_opt, spec, kernel, cfg.effective_tracked_sites());
    write_trajectory_csv(out_dir / "trajectory_optimized.csv", rec_opt);

    // Comparison trajectories: optimized vs the random-product baseline mean
    // vs the model reference state (the Neel state for PXP).
    {
        const std::vector<double>& times = rec_opt.times;
        const auto sched = schedule_for_order(cfg.order);
        // Per-member results land in preallocated slots and are reduced
        // sequentially, so the mean does not depend on thread timing.
        std::vector<std::vector<double>> member_err(size_t(cfg.baseline_count));
        std::vector<std::vector<double>> member_echo(size_t(cfg.baseline_count));
#pragma omp parallel for schedule(dynamic)
        for (int member = 0; member < cfg.baseline_count; ++member) {
            const StateVector psi = haar_random_product_state(
                cfg.L, cfg.seed ^ (BASELINE_SEED_MIX * std::uint64_t(member + 1)));
            member_err[size_t(member)] =
                measured_trotter_error(ham, sched, cfg.dt, psi, times, &spec);
            member_echo[size_t(member)] = loschmidt_exact(spec, psi, times);
        }
        std::vector<double> base_err(times.size(), 0.0), base_echo(times.size(), 0.0);
        for (int member = 0; member < cfg.baseline_count; ++member)
            for (size_t i = 0; i < times.size(); ++i) {
                base_err[i] += member_err[size_t(member)][i] / cfg.baseline_count;
                base_echo[i] += member_echo[size_t(member)][i] / cfg.baseline_count;
            }

        const bool has_reference = ham.model_spec.name == "pxp";
        std::vector<double> ref_err, ref_echo;
        if (has_reference) {
            const StateVector neel = neel_state(cfg.L);
            ref_err = measured_trotter_error(ham, sched, cfg.dt, neel, times, &spec);
            ref_echo = loschmidt_exact(spec, neel, times);
        }

        std::vector<std::vector<std::optional<double>>> rows;
        for (size_t i = 0; i < times.size(); ++i) {
            std::vector<std::optional<double>> row = {times[i],          rec_opt.trotter_error[i],
                                                      base_err[i],       std::nullopt,
                                                      rec_opt.loschmidt_exact[i], base_echo[i],
                                                      std::nullopt};
            if (has_reference) {
                row[3] = ref_err[i];
                row[6] = ref_echo[i];
            }
            rows.push_back(std::move(row));
        }
        io::write_csv(out_dir / "comparison.csv", "comparison-v1",
                      {"time", "error_optimized", "error_baseline_mean", "error_reference",
                       "echo_optimized", "echo_baseline_mean", "echo_reference"},
                      rows);
    }

    json manifest = manifest_skeleton(cfg, ham, "optimize");
    manifest["ladder_estimate"] = {{"omega_defined", report.omega_defined},
                                   {"omega", report.omega},
                                   {"residual", report.residual}};
    manifest["loss"] = {{"total", final_loss.total},
                        {"error_term", final_loss.error_term},
                        {"echo_term", final_loss.echo_term}};
    manifest["artifacts"] =
        hash_artifacts(out_dir, {"optimized_params.json", "history.csv", "ladder.json",
                                 "trajectory_optimized.csv", "comparison.csv"});
    write_json_file(out_dir / "manifest.json", manifest);
}

void run_figure(const RunConfig& cfg, const std::filesystem::path& out_dir,
                const std::string& which) {
    cfg.validate();
    if (!std::filesystem::exists(out_dir)) throw RunError("run directory does not exist");
    const bool from_optimize = std::filesystem::exists(out_dir / "comparison.csv");

    if (which == "echo" || which == "error") {
        std::vector<svg::Series> series;
        std::vector<std::string> columns = {"time"};
        std::vector<std::vector<double>> data;
        if (from_optimize) {
            const CsvData cmp = require_csv(out_dir, "comparison.csv");
            const auto time = csv_column(cmp, "time");
            const std::string prefix = which == "echo" ? "echo_" : "error_";
            for (const char* kind : {"optimized", "baseline_mean", "reference"}) {
                const auto values = csv_column(cmp, prefix + kind);
                if (std::all_of(values.begin(), values.end(),
                                [](double v) { return std::isnan(v); }))
                    continue;
                series.push_back({kind, time, values});
                columns.push_back(prefix + kind);
                data.push_back(values);
            }
            data.insert(data.begin(), time);
        } else {
            const CsvData traj = require_csv(out_dir, "trajectory.csv");
            const auto time = csv_column(traj, "time");
            const std::vector<std::string> wanted =
                which == "echo" ? std::vector<std::string>{"loschmidt_exact", "loschmidt_trotter"}
                                : std::vector<std::string>{"trotter_error", "predicted_error"};
            for (const std::string& name : wanted) {
                const auto values = csv_column(traj, name);
                if (std::all_of(values.begin(), values.end(),
                                [](double v) { return std::isnan(v); }))
                    continue;
                series.push_back({name, time, values});
                columns.push_back(name);
                data.push_back(values);
            }
            data.insert(data.begin(), time);
        }
        std::vector<std::vector<std::optional<double>>> rows;
        for (size_t i = 0; i < data[0].size(); ++i) {
            std::vector<std::optional<double>> row;
            for (const auto& col : data)
                row.emplace_back(std::isnan(col[i]) ? std::optional<double>{} : col[i]);
            rows.push_back(std::move(row));
        }
        io::write_csv(out_dir / ("figure_" + which + ".csv"), "figure-" + which + "-v1", columns,
                      rows);
        svg::write_chart(out_dir / ("figure_" + which + ".svg"),
                         which == "echo" ? "Loschmidt echo" : "Accumulated Trotter error", "time",
                         which == "echo" ? "F(t)" : "||error||", series, which == "error");
        return;
    }

    if (which == "overlaps") {
        const auto path = out_dir / "ladder.json";
        if (!std::filesystem::exists(path)) throw RunError("missing artifact: " + path.string());
        std::ifstream in(path);
        json j;
        in >> j;
        std::vector<double> energy, weight;
        for (const auto& pair : j["top_overlaps"]) {
            energy.push_back(pair[0].get<double>());
            weight.push_back(pair[1].get<double>());
        }
        std::vector<std::vector<std::optional<double>>> rows;
        for (size_t i = 0; i < energy.size(); ++i) rows.push_back({energy[i], weight[i]});
        io::write_csv(out_dir / "figure_overlaps.csv", "figure-overlaps-v1", {"energy", "weight"},
                      rows);
        svg::write_chart(out_dir / "figure_overlaps.svg", "Eigenstate overlaps", "E_n",
                         "|<n|psi>|^2", {{"overlaps", energy, weight, true}}, true);
        return;
    }

    if (which == "bloch") {
        const std::string source = from_optimize ? "trajectory_optimized.csv" : "trajectory.csv";
        const CsvData traj = require_csv(out_dir, source);
        const int site = cfg.effective_tracked_sites().front();
        const std::string base = "bloch" + std::to_string(site) + "_";
        const auto time = csv_column(traj, "time");
        const auto bx = csv_column(traj, base + "x");
        const auto by = csv_column(traj, base + "y");
        const auto bz = csv_column(traj, base + "z");
        std::vector<std::vector<std::optional<double>>> rows;
        for (size_t i = 0; i < time.size(); ++i) rows.push_back({time[i], bx[i], by[i], bz[i]});
        io::write_csv(out_dir / "figure_bloch.csv", "figure-bloch-v1",
                      {"time", "bloch_x", "bloch_y", "bloch_z"}, rows);
        svg::write_chart(out_dir / "figure_bloch.svg",
                         "Bloch trajectory (site " + std::to_string(site) + ")", "<sigma_x>",
                         "<sigma_y> / <sigma_z>",
                         {{"xy", bx, by}, {"xz", bx, bz}});
        return;
    }

    throw ConfigError("unknown figure kind '" + which + "' (echo|error|overlaps|bloch)");
}

bool run_selftest(std::ostream& log) {
    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok) {
        log << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        all_ok = all_ok && ok;
    };

    {
        bool ok = true;
        for (int k = 1; k <= 4; ++k) {
            const double p = suzuki_p(k), s = suzuki_s(k);
            ok = ok && std::abs(4 * p + s - 1) < 1e-12 &&
                 std::abs(4 * std::pow(p, 2 * k + 1) + std::pow(s, 2 * k + 1)) < 1e-12;
        }
        check("suzuki coefficient identities", ok);
    }
    {
        bool ok = true;
        for (int k = 0; k <= 3; ++k) {
            const auto sched = suzuki_schedule(k);
            ok = ok && std::abs(sched.coefficient_sum(Group::odd) - 1) < 1e-13;
            ok = ok && std::abs(sched.coefficient_sum(Group::even) - 1) < 1e-13;
            if (k >= 1) ok = ok && sched.is_palindromic();
        }
        check("schedule sums and palindromes", ok);
    }
    {
        Mat expected = Mat::Zero(4, 4);
        expected.diagonal() << 1, -1, 1, -1;
        check("bit-ordering convention",
              (kron_embed(pauli_z(), {2}, 2) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
    {
        const auto ham = build_heisenberg(5, 0.5);
        Vec amps = haar_random_product_state(5, 1).amplitudes;
        Vec fast = amps, slow = amps;
        const Mat gate = hermitian_exponential(ham.odd_terms[0].matrix, 0.3);
        kernels::apply_local(fast, 5, {1, 2}, gate);
        kernels::serial::apply_local(slow, 5, {1, 2}, gate);
        const Vec dense = kron_embed(gate, {1, 2}, 5) * amps;
        check("gate kernels vs dense embedding",
              (fast - slow).norm() < 1e-13 && (fast - dense).norm() < 1e-12);
    }
    {
        const auto ham = build_heisenberg(3, 0.5);
        const auto sched = suzuki_schedule(1);
        const StateVector psi0 = haar_random_product_state(3, 2);
        const auto traj = trotter_evolve(ham, sched, 0.05, 10, psi0);
        Vec expected = psi0.amplitudes;
        const Mat step = TrotterPropagator(ham, sched, 0.05).step_matrix();
        for (int n = 0; n < 10; ++n) expected = step * expected;
        check("local-gate step vs dense step matrix",
              (traj.back().amplitudes - expected).norm() < 1e-12);
    }
    {
        const auto ham =
            [] {
                SplitHamiltonian h;
                h.L = 2;
                h.odd_terms.push_back({{1}, pauli_z()});
                h.even_terms.push_back({{1}, pauli_x()});
                h.model_spec = ModelSpec{"pauli-pair", {}, 0.0, ""};
                return h;
            }();
        const auto k1 = error_kernel(ham, 1);
        check("first-order kernel Pauli identity",
              (k1.matrix - kron_embed(pauli_y(), {1}, 2)).cwiseAbs().maxCoeff() < 1e-13);
    }
    {
        const auto ham = build_pxp(6);
        const auto traj = trotter_evolve(ham, suzuki_schedule(1), 0.02, 100,
                                         haar_random_product_state(6, 3));
        check("norm conservation over 100 steps",
              std::abs(traj.back().norm() - 1.0) < 1e-11);
    }
    {
        check("stroboscopic weight continuity",
              std::abs(stroboscopic_g(1e-9, 1.0) - 1.0) < 1e-8 &&
                  std::abs(stroboscopic_g(2.0, M_PI)) < 1e-12);
    }
    {
        RunConfig cfg;
        cfg.L = 6;
        cfg.model_params["h_x"] = 0.25;
        cfg.tracked_sites = {2, 5};
        const RunConfig round = RunConfig::parse_string(cfg.serialize());
        check("config round-trip", round.serialize() == cfg.serialize());
    }
    return all_ok;
}

}  // namespace trotter
