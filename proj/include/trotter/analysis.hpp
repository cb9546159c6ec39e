#pragma once

#include <array>
#include <optional>

#include "trotter/formulas.hpp"

namespace trotter {

/// Spectral prediction of the accumulated Trotter error:
///   error(t) = dt^q * sqrt( sum_n | sum_m c_m Ktilde_nm e^{i w_nm t/2} g(w_nm, t) |^2 )
/// with g(w, t) = 2 sin(w t / 2) / w and the analytic t * sinc limit for
/// |w| t below 1e-7, which covers diagonal terms and degenerate pairs.
double perturbative_error(const SpectralDecomposition& spec, const ErrorKernel& kernel,
                          const StateVector& psi0, double dt, double t);

/// Same prediction evaluated on a whole time grid; transforms the kernel to
/// the eigenbasis once. Time points are processed in parallel.
std::vector<double> perturbative_error_series(const SpectralDecomposition& spec,
                                              const ErrorKernel& kernel, const StateVector& psi0,
                                              double dt, const std::vector<double>& times);

/// Regularized stroboscopic weight g(w, t); exposed for the continuity tests.
double stroboscopic_g(double omega, double t);

/// Loschmidt echo F(t) = |<psi0| e^{-iHt} |psi0>|^2 on a time grid.
std::vector<double> loschmidt_exact(const SpectralDecomposition& spec, const StateVector& psi0,
                                    const std::vector<double>& times);

/// Overlap-squared of each trajectory state with the initial state.
std::vector<double> loschmidt_trotter(const StateVector& psi0,
                                      const std::vector<StateVector>& trajectory);

/// Spectral-support diagnostics of a state: dominant eigenstate overlaps,
/// estimated ladder frequency, and the commensurability residual.
struct LadderReport {
    bool omega_defined = false;
    double omega = 0.0;
    std::vector<double> strobe_times;                 // 2 pi p / omega, p = 1..5
    double residual = 0.0;                            // max |gap - omega * round(gap/omega)|
    std::vector<std::pair<double, double>> top_overlaps;  // (E_n, |c_n|^2), weight descending
};

/// Estimate the ladder frequency of the spectral support of psi0.
///
/// Candidate generators are divisors g/k of the pairwise gaps among the
/// dominant supported eigenstates. Since every ladder is also a ladder at
/// Omega/k, candidates are scanned from the largest down and the first one
/// whose lattice (anchored at the heaviest state) carries at least 99% of the
/// supported weight wins; it is then refined by iterating the closed-form
/// weighted least-squares solution of sum w (gap - k Omega)^2 over the
/// lattice members, and the residual is the worst member-gap deviation.
/// Off-ladder stragglers below the 1% weight fraction are excluded from the
/// fit but still visible in top_overlaps. If no candidate reaches coverage,
/// the globally best-fitting generator is reported and the residual (over
/// all supported gaps) flags the state as incommensurate. Candidates below
/// omega_min are discarded; with fewer than two states above weight_cutoff
/// the frequency is reported undefined.
LadderReport ladder_report(const SpectralDecomposition& spec, const StateVector& psi0,
                           double weight_cutoff = 1e-4, int top_k = 20, double omega_min = 0.0);

/// Equal-weight superposition of eigenvectors whose energies sit on a common
/// lattice E_ref + k * omega within `tol`. Scans every eigenvalue as the
/// reference and keeps the largest member set (one eigenvector per lattice
/// point, lowest energy first, at most max_members). Throws if no lattice
/// with at least two members exists.
StateVector commensurate_ladder_state(const SpectralDecomposition& spec, double omega, double tol,
                                      int max_members);

/// Bloch vector (<sigma^x>, <sigma^y>, <sigma^z>) at a 1-based site.
std::array<double, 3> local_expectations(const StateVector& psi, int site);

/// <S^2> of the whole chain with S = sum_j sigma_j / 2.
double total_spin_expectation(const StateVector& psi);

/// Time series of everything the experiment CSVs need. Loschmidt echoes are
/// dimensionless in [0, 1]; bloch holds one (x, y, z) triple per tracked site
/// per time, computed from the exact evolution.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> loschmidt_exact;
    std::vector<double> loschmidt_trotter;
    std::vector<double> trotter_error;
    std::vector<double> predicted_error;  // empty when no kernel is available
    std::vector<int> tracked_sites;
    std::vector<std::vector<std::array<double, 3>>> bloch;  // [site][time]
};

/// Run the Trotterized evolution for n_steps and record every `stride`-th
/// step (plus step 0). Pass kernel = nullptr to skip the spectral prediction.
TrajectoryRecord record_trajectory(const SplitHamiltonian& ham,
                                   const ProductFormulaSchedule& schedule, double dt, int n_steps,
                                   int stride, const StateVector& psi0,
                                   const SpectralDecomposition& spec, const ErrorKernel* kernel,
                                   const std::vector<int>& tracked_sites);

}  // namespace trotter
