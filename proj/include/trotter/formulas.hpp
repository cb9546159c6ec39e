#pragma once

#include "trotter/linalg.hpp"
#include "trotter/models.hpp"

namespace trotter {

/// One exponential layer of a product formula: exp(-i * coeff * dt * H_group).
struct Layer {
    Group group;
    double coeff;
};

/// Fully expanded, canonically merged layer list of a product formula.
/// Order 1 is the Lie-Trotter split; even orders 2k come from the Suzuki
/// recursion. Adjacent same-group layers are merged (exact, since same-group
/// exponentials commute), so layers alternate groups.
struct ProductFormulaSchedule {
    int order = 0;
    std::vector<Layer> layers;

    double coefficient_sum(Group g) const;
    bool is_palindromic(double tol = 1e-14) const;
};

/// Suzuki coefficient p_k = 1/(4 - 4^(1/(2k+1))); s_k = 1 - 4 p_k.
double suzuki_p(int k);
double suzuki_s(int k);

/// k = 0 gives the first-order split, k = 1 the symmetric second-order one,
/// k >= 2 applies the recursion S_{2k} = S_{2k-2}(p)^2 S_{2k-2}(s) S_{2k-2}(p)^2.
ProductFormulaSchedule suzuki_schedule(int k);

/// Schedule of a given formula order q (1 or even).
ProductFormulaSchedule schedule_for_order(int q);

/// Apply exp(-i * coeff_dt * sum(terms)) to psi by applying each term's
/// exponential in sequence; exact for pairwise-commuting terms.
StateVector apply_group_exponential(const std::vector<LocalTerm>& terms, double coeff_dt,
                                    const StateVector& psi);

/// Precomputed local gates for one Trotter step of a schedule. step() and
/// step_adjoint() act in place on a raw amplitude vector; forward gates are
/// exact exponentials of the Hermitian terms, so steps are unitary to
/// machine precision.
class TrotterPropagator {
  public:
    TrotterPropagator(const SplitHamiltonian& ham, const ProductFormulaSchedule& schedule,
                      double dt);

    void step(Vec& amps) const;
    void step_adjoint(Vec& amps) const;

    int n_qubits() const { return L_; }
    double dt() const { return dt_; }

    /// Dense single-step matrix, product of dense layer exponentials.
    Mat step_matrix() const;

  private:
    struct Gate {
        std::vector<int> sites;
        Mat forward;
        Mat adjoint;
    };
    int L_;
    double dt_;
    const SplitHamiltonian* ham_;
    const ProductFormulaSchedule schedule_;
    std::vector<Gate> gates_;
};

/// States after each of n_steps schedule applications; element 0 is psi0.
std::vector<StateVector> trotter_evolve(const SplitHamiltonian& ham,
                                        const ProductFormulaSchedule& schedule, double dt,
                                        int n_steps, const StateVector& psi0);

/// Hermitian leading error kernel K_q of the order-q formula.
struct ErrorKernel {
    int order = 0;
    Mat matrix;
};

/// K1 = -(i/2)[H_o, H_e]; K2 = (1/24)([H_o,[H_o,H_e]] + 2[H_e,[H_o,H_e]]);
/// K4 combines the fifth-order kernel of the symmetric factor (extracted
/// numerically by Richardson extrapolation of the step generator) with the
/// cross commutator [H,[H,K2]].
ErrorKernel error_kernel(const SplitHamiltonian& ham, int order);

/// || exact(t) - trotterized(t) || at each requested time. Every time must be
/// an integer multiple of dt within 1e-9. Pass a precomputed spectral
/// decomposition of H to skip the internal eigendecomposition.
std::vector<double> measured_trotter_error(const SplitHamiltonian& ham,
                                           const ProductFormulaSchedule& schedule, double dt,
                                           const StateVector& psi0,
                                           const std::vector<double>& times,
                                           const SpectralDecomposition* spec = nullptr);

}  // namespace trotter
