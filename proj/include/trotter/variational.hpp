#pragma once

#include <cstdint>

#include "trotter/analysis.hpp"

namespace trotter {

/// Two rotation angles per site: |psi> = prod_j R_y(phi_j) R_x(theta_j) |0>_j
/// with R_a(alpha) = exp(-i alpha sigma^a / 2).
struct VariationalParameters {
    RVec theta;
    RVec phi;

    int n_sites() const { return int(theta.size()); }
    /// Angles wrapped into (-pi, pi].
    VariationalParameters canonical() const;
};

/// Composite loss: l1 * ||delta_psi(T_l)|| plus the time-averaged Trotterized
/// Loschmidt echo weighted by l2, integrated by the trapezoidal rule on the
/// dt grid.
struct LossConfig {
    double l1 = 1.0;
    double l2 = 1e-5;
    double t_l = 10.0;
    double dt = 0.01;
    int schedule_order = 2;

    int n_steps() const;  // T_l / dt, validated integral within 1e-9
    void validate() const;
};

struct LossBreakdown {
    double total = 0.0;
    double error_term = 0.0;  // l1 * ||delta_psi(T_l)||
    double echo_term = 0.0;   // (l2 / T_l) * integral of F_T
};

/// Adam with cosine-annealed learning rate and uniform random restarts.
struct AdamConfig {
    int iters = 2000;
    double lr0 = 0.05;
    double lr_min = 1e-4;
    std::uint64_t seed = 0;
    int restarts = 8;
};

struct OptimizationHistory {
    struct Entry {
        double loss;
        double error_term;
        double echo_term;
        double lr;
        RVec theta;
        RVec phi;
    };
    std::vector<Entry> entries;  // per-iteration trace of the winning restart
    int winning_restart = 0;
    std::vector<double> restart_best_losses;
    std::vector<std::string> diagnostics;  // aborted restarts etc.
};

StateVector prepare_product_state(const VariationalParameters& params);

/// Product state with each site's Bloch vector uniform on the sphere;
/// deterministic per seed.
StateVector haar_random_product_state(int L, std::uint64_t seed);

/// Loss evaluated through the literal gate-by-gate Trotter evolution; the
/// error term equals measured_trotter_error at T_l exactly.
LossBreakdown composite_loss(const VariationalParameters& params, const SplitHamiltonian& ham,
                             const LossConfig& cfg);

/// Gradient of the composite loss with respect to (theta_1..theta_L,
/// phi_1..phi_L), computed by adjoint sweeps through the same gate-by-gate
/// evolution: one forward trajectory accumulating the echo costate, one
/// backward sweep carrying the reversed echo costate and the error costate.
RVec loss_gradient(const VariationalParameters& params, const SplitHamiltonian& ham,
                   const LossConfig& cfg);

/// Fast loss/gradient engine for the optimizer. Multi-step Trotter evolution
/// is exact at the level of the step generator H_eff = i log S(dt) / dt, so
/// the whole trajectory reduces to phase sweeps in the H_eff eigenbasis; one
/// evaluation costs a few dense matvecs instead of n_steps gate sweeps.
/// Agrees with composite_loss / loss_gradient to spectral-decomposition
/// accuracy (~1e-10).
class LossEvaluator {
  public:
    LossEvaluator(const SplitHamiltonian& ham, const LossConfig& cfg);

    LossBreakdown loss(const VariationalParameters& params) const;
    LossBreakdown loss_and_gradient(const VariationalParameters& params, RVec& grad) const;

    const SpectralDecomposition& hamiltonian_spectrum() const { return spec_h_; }

  private:
    int L_;
    LossConfig cfg_;
    int n_steps_;
    SpectralDecomposition spec_h_;    // of H
    SpectralDecomposition spec_eff_;  // of H_eff
    std::vector<double> weights_;     // trapezoid weights * dt
};

/// Adam + cosine annealing from `restarts` uniform initializations (restart
/// RNG streams derive from the master seed; restarts run in parallel).
/// Returns the best parameters seen across all restarts and iterations.
std::pair<VariationalParameters, OptimizationHistory> optimize(const SplitHamiltonian& ham,
                                                               const LossConfig& cfg,
                                                               const AdamConfig& opt);

}  // namespace trotter
