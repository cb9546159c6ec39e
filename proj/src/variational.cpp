#include "trotter/variational.hpp"

#include <cmath>
#include <random>

namespace trotter {

namespace {

constexpr double ADAM_BETA1 = 0.9;
constexpr double ADAM_BETA2 = 0.999;
constexpr double ADAM_EPS = 1e-8;
constexpr double ERROR_NORM_FLOOR = 1e-14;  // ||.|| is not differentiable at 0

double wrap_angle(double x) {
    double r = std::fmod(x + M_PI, 2.0 * M_PI);
    if (r <= 0.0) r += 2.0 * M_PI;
    return r - M_PI;
}

Eigen::Vector2cd single_site_state(double theta, double phi) {
    const double ct = std::cos(theta / 2.0), st = std::sin(theta / 2.0);
    const double cp = std::cos(phi / 2.0), sp = std::sin(phi / 2.0);
    Eigen::Vector2cd u;
    u << cxd(cp * ct, sp * st), cxd(sp * ct, -cp * st);
    return u;
}

// d/dtheta and d/dphi of the single-site state.
Eigen::Vector2cd single_site_dtheta(double theta, double phi) {
    const double ct = std::cos(theta / 2.0), st = std::sin(theta / 2.0);
    const double cp = std::cos(phi / 2.0), sp = std::sin(phi / 2.0);
    // R_y(phi) * (-i sigma_x / 2) * R_x(theta)|0> = R_y(phi) * (-st, -i ct)/2
    Eigen::Vector2cd u;
    u << cxd(-cp * st, sp * ct) * 0.5, cxd(-sp * st, -cp * ct) * 0.5;
    return u;
}

Eigen::Vector2cd single_site_dphi(double theta, double phi) {
    const Eigen::Vector2cd u = single_site_state(theta, phi);
    Eigen::Vector2cd d;
    d << -u(1) / 2.0, u(0) / 2.0;  // (-i sigma_y / 2) u
    return d;
}

Vec chain_product(const std::vector<Eigen::Vector2cd>& sites) {
    Vec amps = Vec::Ones(1);
    for (const auto& u : sites) {
        Vec next(2 * amps.size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            next(2 * i) = amps(i) * u(0);
            next(2 * i + 1) = amps(i) * u(1);
        }
        amps = next;
    }
    return amps;
}

// All 2L parameter-derivative vectors of the product state; columns ordered
// theta_1..theta_L, phi_1..phi_L.
Mat parameter_derivatives(const VariationalParameters& params) {
    const int L = params.n_sites();
    std::vector<Eigen::Vector2cd> base(static_cast<size_t>(L));
    for (int j = 0; j < L; ++j) base[size_t(j)] = single_site_state(params.theta(j), params.phi(j));

    Mat out(Eigen::Index(1) << L, 2 * L);
    for (int j = 0; j < L; ++j) {
        auto modified = base;
        modified[size_t(j)] = single_site_dtheta(params.theta(j), params.phi(j));
        out.col(j) = chain_product(modified);
        modified[size_t(j)] = single_site_dphi(params.theta(j), params.phi(j));
        out.col(L + j) = chain_product(modified);
    }
    return out;
}

void check_param_sizes(const VariationalParameters& params) {
    if (params.theta.size() != params.phi.size() || params.theta.size() < 1)
        throw std::invalid_argument("VariationalParameters: theta/phi length mismatch");
    if (!params.theta.allFinite() || !params.phi.allFinite())
        throw std::invalid_argument("VariationalParameters: non-finite angle");
}

std::vector<double> trapezoid_weights(int n_steps, double dt) {
    std::vector<double> w(size_t(n_steps) + 1, dt);
    w.front() = dt / 2.0;
    w.back() = dt / 2.0;
    return w;
}

}  // namespace

VariationalParameters VariationalParameters::canonical() const {
    VariationalParameters out = *this;
    for (Eigen::Index i = 0; i < out.theta.size(); ++i) {
        out.theta(i) = wrap_angle(out.theta(i));
        out.phi(i) = wrap_angle(out.phi(i));
    }
    return out;
}

int LossConfig::n_steps() const {
    const long n = std::lround(t_l / dt);
    return int(n);
}

void LossConfig::validate() const {
    if (l1 < 0.0 || l2 < 0.0) throw std::invalid_argument("LossConfig: negative weight");
    if (dt <= 0.0 || t_l <= 0.0) throw std::invalid_argument("LossConfig: dt and T_l must be > 0");
    const long n = std::lround(t_l / dt);
    if (n < 1 || std::abs(t_l - double(n) * dt) > 1e-9)
        throw std::invalid_argument("LossConfig: T_l must be an integer multiple of dt");
    schedule_for_order(schedule_order);  // throws on unsupported order
}

StateVector prepare_product_state(const VariationalParameters& params) {
    check_param_sizes(params);
    const int L = params.n_sites();
    std::vector<Eigen::Vector2cd> sites(static_cast<size_t>(L));
    for (int j = 0; j < L; ++j)
        sites[size_t(j)] = single_site_state(params.theta(j), params.phi(j));
    return StateVector(L, chain_product(sites));
}

StateVector haar_random_product_state(int L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<Eigen::Vector2cd> sites(static_cast<size_t>(L));
    for (int j = 0; j < L; ++j) {
        const double z = 2.0 * uniform(rng) - 1.0;
        const double azimuth = 2.0 * M_PI * uniform(rng);
        const double polar = std::acos(z);
        Eigen::Vector2cd u;
        u << std::cos(polar / 2.0), std::polar(std::sin(polar / 2.0), azimuth);
        sites[size_t(j)] = u;
    }
    return StateVector(L, chain_product(sites));
}

LossBreakdown composite_loss(const VariationalParameters& params, const SplitHamiltonian& ham,
                             const LossConfig& cfg) {
    cfg.validate();
    check_param_sizes(params);
    if (params.n_sites() != ham.L) throw std::invalid_argument("composite_loss: L mismatch");
    if (cfg.l1 == 0.0 && cfg.l2 == 0.0) return {};

    const StateVector psi0 = prepare_product_state(params);
    const int n_steps = cfg.n_steps();
    const auto weights = trapezoid_weights(n_steps, cfg.dt);
    const TrotterPropagator prop(ham, schedule_for_order(cfg.schedule_order), cfg.dt);

    Vec amps = psi0.amplitudes;
    double echo_integral = weights[0];  // F_T(0) = 1
    for (int n = 1; n <= n_steps; ++n) {
        prop.step(amps);
        echo_integral += weights[size_t(n)] * std::norm(psi0.amplitudes.dot(amps));
    }

    LossBreakdown out;
    out.echo_term = cfg.l2 / cfg.t_l * echo_integral;
    if (cfg.l1 > 0.0) {
        const auto spec = eigendecompose_hermitian(ham.full_matrix());
        const StateVector ideal = exact_evolve(spec, psi0, cfg.t_l);
        out.error_term = cfg.l1 * (ideal.amplitudes - amps).norm();
    }
    out.total = out.error_term + out.echo_term;
    return out;
}

RVec loss_gradient(const VariationalParameters& params, const SplitHamiltonian& ham,
                   const LossConfig& cfg) {
    cfg.validate();
    check_param_sizes(params);
    if (params.n_sites() != ham.L) throw std::invalid_argument("loss_gradient: L mismatch");
    const int L = params.n_sites();
    if (cfg.l1 == 0.0 && cfg.l2 == 0.0) return RVec::Zero(2 * L);

    const StateVector psi0 = prepare_product_state(params);
    const int n_steps = cfg.n_steps();
    const auto weights = trapezoid_weights(n_steps, cfg.dt);
    const TrotterPropagator prop(ham, schedule_for_order(cfg.schedule_order), cfg.dt);

    // Forward sweep: trajectory overlaps a_n = <psi0|Phi_n> and the forward
    // echo costate u = sum_n w_n conj(a_n) Phi_n.
    std::vector<cxd> a(size_t(n_steps) + 1);
    a[0] = 1.0;
    Vec amps = psi0.amplitudes;
    Vec u_costate = weights[0] * psi0.amplitudes;
    for (int n = 1; n <= n_steps; ++n) {
        prop.step(amps);
        a[size_t(n)] = psi0.amplitudes.dot(amps);
        u_costate += weights[size_t(n)] * std::conj(a[size_t(n)]) * amps;
    }

    const auto spec = eigendecompose_hermitian(ham.full_matrix());
    const StateVector ideal = exact_evolve(spec, psi0, cfg.t_l);
    const Vec diff = ideal.amplitudes - amps;
    const double error_norm = diff.norm();

    // Backward sweep: xi_n = (S^dagger)^n psi0 accumulates the reversed echo
    // costate v = sum_n w_n a_n xi_n; the same sweep carries the error
    // costate (S^dagger)^N diff.
    Vec xi = psi0.amplitudes;
    Vec v_costate = weights[0] * a[0] * xi;
    Vec diff_back = diff;
    for (int n = 1; n <= n_steps; ++n) {
        prop.step_adjoint(xi);
        v_costate += weights[size_t(n)] * a[size_t(n)] * xi;
        prop.step_adjoint(diff_back);
    }

    Vec y = Vec::Zero(psi0.dim());
    if (cfg.l1 > 0.0 && error_norm > ERROR_NORM_FLOOR) {
        const StateVector diff_state(L, diff, false);
        const Vec exact_back = exact_evolve(spec, diff_state, -cfg.t_l).amplitudes;
        y += (cfg.l1 / error_norm) * (exact_back - diff_back);
    }
    if (cfg.l2 > 0.0) y += (2.0 * cfg.l2 / cfg.t_l) * (u_costate + v_costate);

    const Mat derivs = parameter_derivatives(params);
    RVec grad(2 * L);
    for (int p = 0; p < 2 * L; ++p) grad(p) = y.dot(derivs.col(p)).real();
    return grad;
}

LossEvaluator::LossEvaluator(const SplitHamiltonian& ham, const LossConfig& cfg)
    : L_(ham.L), cfg_(cfg) {
    cfg.validate();
    n_steps_ = cfg.n_steps();
    weights_ = trapezoid_weights(n_steps_, cfg.dt);
    spec_h_ = eigendecompose_hermitian(ham.full_matrix());
    const Mat step =
        TrotterPropagator(ham, schedule_for_order(cfg.schedule_order), cfg.dt).step_matrix();
    spec_eff_ = eigendecompose_hermitian(unitary_log_generator(step, cfg.dt));
}

LossBreakdown LossEvaluator::loss(const VariationalParameters& params) const {
    RVec scratch;
    return loss_and_gradient(params, scratch);
}

LossBreakdown LossEvaluator::loss_and_gradient(const VariationalParameters& params,
                                               RVec& grad) const {
    check_param_sizes(params);
    if (params.n_sites() != L_) throw std::invalid_argument("LossEvaluator: L mismatch");
    const StateVector psi0 = prepare_product_state(params);
    const Eigen::Index dim = psi0.dim();

    const Vec gamma = spec_eff_.basis.adjoint() * psi0.amplitudes;
    const Vec c = spec_h_.basis.adjoint() * psi0.amplitudes;

    Vec step_phase(dim), gamma_sq(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        step_phase(k) = std::polar(1.0, -spec_eff_.energies(k) * cfg_.dt);
        gamma_sq(k) = std::norm(gamma(k));
    }

    // Echo overlaps a_n = sum_k |gamma_k|^2 e^{-i E_k n dt} by running phases.
    std::vector<cxd> a(size_t(n_steps_) + 1);
    Vec running = Vec::Ones(dim);
    double echo_integral = 0.0;
    for (int n = 0; n <= n_steps_; ++n) {
        cxd overlap{0.0, 0.0};
        for (Eigen::Index k = 0; k < dim; ++k) overlap += gamma_sq(k) * running(k);
        a[size_t(n)] = overlap;
        echo_integral += weights_[size_t(n)] * std::norm(overlap);
        if (n < n_steps_) running.array() *= step_phase.array();
    }

    // Final Trotterized and ideal states from exact end-point phases.
    Vec phi_n(dim), psi_t(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        phi_n(k) = std::polar(1.0, -spec_eff_.energies(k) * cfg_.dt * n_steps_) * gamma(k);
    const Vec trotter_final = spec_eff_.basis * phi_n;
    for (Eigen::Index k = 0; k < dim; ++k)
        psi_t(k) = std::polar(1.0, -spec_h_.energies(k) * cfg_.t_l) * c(k);
    const Vec ideal_final = spec_h_.basis * psi_t;

    const Vec diff = ideal_final - trotter_final;
    const double error_norm = diff.norm();

    LossBreakdown out;
    out.error_term = cfg_.l1 * error_norm;
    out.echo_term = cfg_.l2 / cfg_.t_l * echo_integral;
    out.total = out.error_term + out.echo_term;

    // Gradient costate y with grad_p = Re <y | d psi0 / d p>.
    Vec y = Vec::Zero(dim);
    if (cfg_.l1 > 0.0 && error_norm > ERROR_NORM_FLOOR) {
        const Vec hd = spec_h_.basis.adjoint() * diff;
        const Vec ed = spec_eff_.basis.adjoint() * diff;
        Vec back_h(dim), back_e(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            back_h(k) = std::polar(1.0, spec_h_.energies(k) * cfg_.t_l) * hd(k);
            back_e(k) = std::polar(1.0, spec_eff_.energies(k) * cfg_.dt * n_steps_) * ed(k);
        }
        y += (cfg_.l1 / error_norm) * (spec_h_.basis * back_h - spec_eff_.basis * back_e);
    }
    if (cfg_.l2 > 0.0) {
        Vec sigma = Vec::Zero(dim);
        running.setOnes();
        for (int n = 0; n <= n_steps_; ++n) {
            const cxd wa = weights_[size_t(n)] * std::conj(a[size_t(n)]);
            sigma += wa * running;
            if (n < n_steps_) running.array() *= step_phase.array();
        }
        Vec combined(dim);
        for (Eigen::Index k = 0; k < dim; ++k)
            combined(k) = 2.0 * sigma(k).real() * gamma(k);  // (sigma + conj sigma) ∘ gamma
        y += (2.0 * cfg_.l2 / cfg_.t_l) * (spec_eff_.basis * combined);
    }

    const Mat derivs = parameter_derivatives(params);
    grad.resize(2 * L_);
    for (int p = 0; p < 2 * L_; ++p) grad(p) = y.dot(derivs.col(p)).real();
    return out;
}

std::pair<VariationalParameters, OptimizationHistory> optimize(const SplitHamiltonian& ham,
                                                               const LossConfig& cfg,
                                                               const AdamConfig& opt) {
    if (opt.iters < 1) throw std::invalid_argument("optimize: iters must be >= 1");
    if (!(opt.lr0 > opt.lr_min) || opt.lr_min < 0.0)
        throw std::invalid_argument("optimize: need lr0 > lr_min >= 0");
    if (opt.restarts < 1) throw std::invalid_argument("optimize: restarts must be >= 1");

    const LossEvaluator evaluator(ham, cfg);
    const int L = ham.L;

    struct RestartResult {
        double best_loss = std::numeric_limits<double>::infinity();
        VariationalParameters best_params;
        std::vector<OptimizationHistory::Entry> entries;
        std::string diagnostic;
    };
    std::vector<RestartResult> results(size_t(opt.restarts));

#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < opt.restarts; ++r) {
        RestartResult& res = results[size_t(r)];
        std::mt19937_64 rng(opt.seed ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(r + 1)));
        std::uniform_real_distribution<double> angle(-M_PI, M_PI);

        VariationalParameters params{RVec(L), RVec(L)};
        for (int j = 0; j < L; ++j) {
            params.theta(j) = angle(rng);
            params.phi(j) = angle(rng);
        }

        RVec m = RVec::Zero(2 * L), v = RVec::Zero(2 * L), grad(2 * L);
        res.entries.reserve(size_t(opt.iters) + 1);
        for (int i = 0; i <= opt.iters; ++i) {
            const double lr =
                opt.lr_min + (opt.lr0 - opt.lr_min) * (1.0 + std::cos(M_PI * i / opt.iters)) / 2.0;
            LossBreakdown lb;
            try {
                lb = evaluator.loss_and_gradient(params, grad);
            } catch (const std::exception& err) {
                res.diagnostic = err.what();
                break;
            }
            if (!std::isfinite(lb.total)) {
                res.diagnostic = "non-finite loss, restart aborted";
                break;
            }
            res.entries.push_back({lb.total, lb.error_term, lb.echo_term, lr, params.theta,
                                   params.phi});
            if (lb.total < res.best_loss) {
                res.best_loss = lb.total;
                res.best_params = params;
            }
            if (i == opt.iters) break;  // final evaluation only

            const double t = double(i + 1);
            for (int p = 0; p < 2 * L; ++p) {
                m(p) = ADAM_BETA1 * m(p) + (1.0 - ADAM_BETA1) * grad(p);
                v(p) = ADAM_BETA2 * v(p) + (1.0 - ADAM_BETA2) * grad(p) * grad(p);
                const double m_hat = m(p) / (1.0 - std::pow(ADAM_BETA1, t));
                const double v_hat = v(p) / (1.0 - std::pow(ADAM_BETA2, t));
                RVec& target = p < L ? params.theta : params.phi;
                target(p < L ? p : p - L) -= lr * m_hat / (std::sqrt(v_hat) + ADAM_EPS);
            }
        }
    }

    int winner = 0;
    for (int r = 1; r < opt.restarts; ++r)
        if (results[size_t(r)].best_loss < results[size_t(winner)].best_loss) winner = r;

    OptimizationHistory history;
    history.winning_restart = winner;
    history.entries = results[size_t(winner)].entries;
    for (const auto& res : results) {
        history.restart_best_losses.push_back(res.best_loss);
        if (!res.diagnostic.empty()) history.diagnostics.push_back(res.diagnostic);
    }
    if (!std::isfinite(results[size_t(winner)].best_loss))
        throw std::runtime_error("optimize: every restart aborted with non-finite loss");
    return {results[size_t(winner)].best_params.canonical(), history};
}

}  // namespace trotter
