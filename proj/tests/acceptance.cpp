// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line with the measured numbers. Exit code is the failure count.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trotter/variational.hpp"

using namespace trotter;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& label, const std::string& detail) {
    std::printf("%s  [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, label.c_str(), detail.c_str());
    if (!ok) ++failures;
}

std::vector<SplitHamiltonian> all_models(int L) {
    return {build_heisenberg(L, 0.5), build_stark(L, 1.0, 0.8, 0.9, 4.0), build_pxp(L)};
}

// ---- 1: measured error scales as dt^q for q = 1, 2, 4 ----------------------
void criterion_order_scaling() {
    const auto ham = build_heisenberg(4, 0.5);
    const auto spec = eigendecompose_hermitian(ham.full_matrix());
    const StateVector psi0 = haar_random_product_state(4, 101);
    const std::vector<double> dts = {0.04, 0.02, 0.01};

    bool ok = true;
    std::string detail;
    for (const auto& [k, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 4}}) {
        std::vector<double> errors;
        for (double dt : dts)
            errors.push_back(
                measured_trotter_error(ham, suzuki_schedule(k), dt, psi0, {1.0}, &spec)[0]);
        const double slope = oracle::loglog_slope(dts, errors);
        ok = ok && std::abs(slope - q) <= 0.15;
        detail += "S" + std::to_string(q) + " slope " + std::to_string(slope).substr(0, 5) + "  ";
    }
    report(1, ok, "order scaling at L=4", detail);
}

// ---- 2: kernel identities and H_eff residual contraction -------------------
void criterion_kernel_identities() {
    const auto ham = build_heisenberg(3, 0.5);
    const Mat h = ham.full_matrix();
    const Mat ho = ham.group_matrix(Group::odd);
    const Mat he = ham.group_matrix(Group::even);

    const auto k1 = error_kernel(ham, 1);
    const auto k2 = error_kernel(ham, 2);
    const Mat k1_direct = cxd(0, -0.5) * (ho * he - he * ho);
    const Mat inner = ho * he - he * ho;
    const Mat k2_direct =
        ((ho * inner - inner * ho) + 2.0 * (he * inner - inner * he)) / 24.0;

    bool ok = hermiticity_error(k1.matrix) < 1e-12 && hermiticity_error(k2.matrix) < 1e-12 &&
              (k1.matrix - k1_direct).cwiseAbs().maxCoeff() < 1e-12 &&
              (k2.matrix - k2_direct).cwiseAbs().maxCoeff() < 1e-12;
    std::string detail = "hermiticity ok; ";

    for (const auto& [k, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}) {
        const auto sched = suzuki_schedule(k);
        const auto kern = error_kernel(ham, q);
        auto resid = [&](double dt) {
            const Mat heff =
                unitary_log_generator(TrotterPropagator(ham, sched, dt).step_matrix(), dt);
            return (heff - h - std::pow(dt, q) * kern.matrix).operatorNorm();
        };
        const double ratio = resid(0.04) / resid(0.02);
        const double required = std::pow(2.0, q + 2);
        const bool in_band = std::abs(ratio - required) <= 0.2 * required;
        ok = ok && in_band;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "q=%d ratio %.3f (required %.0f +- 20%%)  ", q, ratio,
                      required);
        detail += buf;
    }
    report(2, ok, "kernel identities and H_eff residual", detail);
}

// ---- 3: Suzuki coefficients -------------------------------------------------
void criterion_suzuki_coefficients() {
    bool ok = true;
    for (int k = 1; k <= 4; ++k) {
        const double p = suzuki_p(k), s = suzuki_s(k);
        ok = ok && std::abs(4 * p + s - 1) < 1e-12;
        ok = ok && std::abs(4 * std::pow(p, 2 * k + 1) + std::pow(s, 2 * k + 1)) < 1e-12;
    }
    ok = ok && std::abs(suzuki_p(1) - 0.4145) < 5e-5 && std::abs(suzuki_s(1) + 0.6580) < 5e-5;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "p1=%.6f s1=%.6f", suzuki_p(1), suzuki_s(1));
    report(3, ok, "suzuki coefficients k=1..4", buf);
}

// ---- 4: spectral predictor vs measured error --------------------------------
void criterion_predictor_accuracy() {
    std::vector<double> times;
    for (double t = 0.5; t <= 10.0 + 1e-12; t += 0.5) times.push_back(t);

    bool ok = true;
    double worst = 0.0;
    for (const auto& ham : all_models(6)) {
        const auto spec = eigendecompose_hermitian(ham.full_matrix());
        const auto kern = error_kernel(ham, 2);
        for (int s = 0; s < 5; ++s) {
            const StateVector psi0 = haar_random_product_state(6, 400 + std::uint64_t(s));
            const auto measured =
                measured_trotter_error(ham, suzuki_schedule(1), 0.01, psi0, times, &spec);
            const auto predicted = perturbative_error_series(spec, kern, psi0, 0.01, times);
            for (size_t i = 0; i < times.size(); ++i) {
                if (measured[i] <= 1e-8) continue;
                const double rel = std::abs(predicted[i] - measured[i]) / measured[i];
                worst = std::max(worst, rel);
                ok = ok && rel < 0.10;
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst relative deviation %.4f", worst);
    report(4, ok, "spectral error predictor within 10% (3 models, 5 states)", buf);
}

// ---- 5: stroboscopic suppression on a constructed ladder state --------------
void criterion_stroboscopic_suppression() {
    const double h_z = 4.0;
    const auto ham = build_stark(6, 0.1, 0.07, 0.07, h_z);
    const auto spec = eigendecompose_hermitian(ham.full_matrix());
    const double omega = 2.0 * h_z;
    const StateVector psi0 = commensurate_ladder_state(spec, omega, 2e-3, 5);

    const double t1 = 2.0 * M_PI / omega;
    const int per_strobe = 100;
    const double dt = t1 / per_strobe;
    std::vector<double> times;
    for (int n = 1; n <= 3 * per_strobe; ++n) times.push_back(n * dt);
    const auto err = measured_trotter_error(ham, suzuki_schedule(1), dt, psi0, times, &spec);

    bool ok = true;
    std::string detail;
    for (int p = 1; p <= 3; ++p) {
        const double f = loschmidt_exact(spec, psi0, {p * t1})[0];
        double local_max = 0.0;
        for (int n = (p - 1) * per_strobe; n < p * per_strobe; ++n)
            local_max = std::max(local_max, err[size_t(n)]);
        const double at_strobe = err[size_t(p * per_strobe - 1)];
        ok = ok && f > 0.999 && at_strobe < 0.2 * local_max;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "p=%d F=%.5f dip=%.3f  ", p, f, at_strobe / local_max);
        detail += buf;
    }
    report(5, ok, "stroboscopic suppression (Stark ladder state)", detail);
}

// ---- 6: adjoint gradient vs 5-point finite differences ----------------------
void criterion_gradient_check() {
    LossConfig cfg;  // defaults: T_l = 10, dt = 0.01, S2
    bool ok = true;
    double worst = 0.0;
    for (const auto& ham : all_models(4)) {
        for (int point = 0; point < 20; ++point) {
            std::mt19937 rng(700 + unsigned(point));
            std::uniform_real_distribution<double> angle(-M_PI, M_PI);
            VariationalParameters params{RVec(4), RVec(4)};
            for (int j = 0; j < 4; ++j) {
                params.theta(j) = angle(rng);
                params.phi(j) = angle(rng);
            }
            const RVec grad = loss_gradient(params, ham, cfg);
            auto f = [&](const Eigen::VectorXd& x) {
                VariationalParameters q{x.head(4), x.tail(4)};
                return composite_loss(q, ham, cfg).total;
            };
            Eigen::VectorXd x(8);
            x << params.theta, params.phi;
            const Eigen::VectorXd fd = oracle::five_point_difference(f, x, 3e-3);
            for (int p = 0; p < 8; ++p) {
                if (std::abs(grad(p)) <= 1e-8) continue;
                const double rel = std::abs(fd(p) - grad(p)) / std::abs(grad(p));
                worst = std::max(worst, rel);
                ok = ok && rel < 1e-4;
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst relative mismatch %.2e", worst);
    report(6, ok, "gradient vs 5-point stencil (3 models x 20 points)", buf);
}

// ---- 7: variational discovery on the heisenberg chain -----------------------
void criterion_variational_discovery() {
    const double h_x = 0.5;
    const auto ham = build_heisenberg(8, h_x);
    LossConfig cfg;  // library defaults: T_l = 10, dt = 0.01, S2
    AdamConfig opt;  // defaults: 2000 iters, 8 restarts, lr 0.05 -> 1e-4

    const auto [best, history] = optimize(ham, cfg, opt);
    const auto lb = composite_loss(best, ham, cfg);
    const auto spec = eigendecompose_hermitian(ham.full_matrix());

    double baseline = 0.0;
    for (int s = 0; s < 100; ++s) {
        const StateVector psi = haar_random_product_state(8, 900 + std::uint64_t(s));
        baseline += measured_trotter_error(ham, suzuki_schedule(1), cfg.dt, psi, {cfg.t_l}, &spec)[0];
    }
    baseline /= 100.0;

    const StateVector psi_opt = prepare_product_state(best);
    const auto ladder = ladder_report(spec, psi_opt);
    const double revival = loschmidt_exact(spec, psi_opt, {4.0 * M_PI})[0];

    const bool ok = lb.error_term <= 0.1 * baseline && ladder.omega_defined &&
                    std::abs(ladder.omega - h_x) <= 0.1 * h_x && revival > 0.9;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "error %.2e vs baseline %.2e, omega %.4f, F(4pi)=%.4f",
                  lb.error_term, baseline, ladder.omega_defined ? ladder.omega : -1.0, revival);
    report(7, ok, "variational discovery (heisenberg L=8, defaults)", buf);
}

// ---- 8: PXP reference behavior ----------------------------------------------
void criterion_pxp_reference() {
    const auto ham = build_pxp(8);
    LossConfig cfg;
    AdamConfig opt;

    const auto [best, history] = optimize(ham, cfg, opt);
    const auto spec = eigendecompose_hermitian(ham.full_matrix());

    std::vector<double> times;
    for (double t = 0.5; t <= 10.0 + 1e-12; t += 0.5) times.push_back(t);
    auto mean_error = [&](const StateVector& psi) {
        const auto err = measured_trotter_error(ham, suzuki_schedule(1), cfg.dt, psi, times, &spec);
        double m = 0.0;
        for (double e : err) m += e;
        return m / double(err.size());
    };

    double ensemble = 0.0;
    for (int s = 0; s < 100; ++s)
        ensemble += mean_error(haar_random_product_state(8, 1400 + std::uint64_t(s)));
    ensemble /= 100.0;

    std::vector<int> bits = {1, 0, 1, 0, 1, 0, 1, 0};
    const double neel = mean_error(StateVector::basis_state(8, bits));
    const double optimized = mean_error(prepare_product_state(best));

    const bool ok = neel <= 3.0 * ensemble && neel >= ensemble / 3.0 && optimized <= ensemble / 10.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "ensemble %.2e, neel %.2e (x%.2f), optimized %.2e (x%.1e)",
                  ensemble, neel, neel / ensemble, optimized, optimized / ensemble);
    report(8, ok, "PXP Neel near average, optimized 10x below", buf);
}

// ---- 9: conservation suite ---------------------------------------------------
void criterion_conservation() {
    bool ok = true;
    double worst_drift = 0.0;
    for (const auto& ham : all_models(8)) {
        for (int k : {0, 1, 2}) {
            const TrotterPropagator prop(ham, suzuki_schedule(k), 0.01);
            const StateVector psi0 = haar_random_product_state(8, 1700 + std::uint64_t(k));
            Vec amps = psi0.amplitudes;
            for (int n = 1; n <= 1000; ++n) {
                prop.step(amps);
                if (n % 100 == 0) {
                    const double echo = std::norm(psi0.amplitudes.dot(amps));
                    ok = ok && echo >= 0.0 && echo <= 1.0 + 1e-9;
                }
            }
            const double drift = std::abs(amps.norm() - 1.0);
            worst_drift = std::max(worst_drift, drift);
            ok = ok && drift < 1e-9;
            const StateVector state(8, amps);
            for (int site : {1, 4, 8}) {
                const auto b = local_expectations(state, site);
                ok = ok && std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) <= 1.0 + 1e-9;
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst norm drift %.2e over 1000 steps", worst_drift);
    report(9, ok, "conservation (3 models x 3 orders, L=8)", buf);
}

// ---- 10: oracle equivalence ---------------------------------------------------
void criterion_oracle_equivalence() {
    bool ok = true;
    double worst_gate = 0.0;
    for (const auto& ham : all_models(4)) {
        for (int k : {0, 1, 2}) {
            const auto sched = suzuki_schedule(k);
            // Independent dense oracle: Pade exponentials of the group
            // matrices multiplied in operator order.
            Mat dense = Mat::Identity(16, 16);
            for (const Layer& layer : sched.layers)
                dense = dense * oracle::pade_exponential(ham.group_matrix(layer.group),
                                                         layer.coeff * 0.02);
            const StateVector psi0 = haar_random_product_state(4, 2100 + std::uint64_t(k));
            const auto traj = trotter_evolve(ham, sched, 0.02, 1, psi0);
            const double gap = (traj.back().amplitudes - dense * psi0.amplitudes).norm();
            worst_gate = std::max(worst_gate, gap);
            ok = ok && gap < 1e-12;
        }
    }

    double worst_ode = 0.0;
    for (const auto& ham : all_models(3)) {
        const auto spec = eigendecompose_hermitian(ham.full_matrix());
        const StateVector psi0 = haar_random_product_state(3, 2500);
        const StateVector evolved = exact_evolve(spec, psi0, 1.7);
        const Vec reference = oracle::rk4_evolve(ham.full_matrix(), psi0.amplitudes, 1.7, 1e-4);
        const double gap = (evolved.amplitudes - reference).norm();
        worst_ode = std::max(worst_ode, gap);
        ok = ok && gap < 1e-6;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "gate-vs-dense %.2e, exact-vs-RK4 %.2e", worst_gate,
                  worst_ode);
    report(10, ok, "oracle equivalence", buf);
}

}  // namespace

int main() {
    criterion_order_scaling();
    criterion_kernel_identities();
    criterion_suzuki_coefficients();
    criterion_predictor_accuracy();
    criterion_stroboscopic_suppression();
    criterion_gradient_check();
    criterion_variational_discovery();
    criterion_pxp_reference();
    criterion_conservation();
    criterion_oracle_equivalence();

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
