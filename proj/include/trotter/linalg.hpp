#pragma once

#include "trotter/types.hpp"

namespace trotter {

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian
/// operator. Columns of `basis` are the eigenvectors. Within a degenerate
/// cluster the individual eigenvectors carry no ordering guarantee; use
/// projectors onto clusters downstream.
struct SpectralDecomposition {
    RVec energies;
    Mat basis;

    Eigen::Index dim() const { return energies.size(); }
};

/// Embed `local` (dim 2^|sites|) acting on the given ascending 1-based sites
/// into the full 2^L space, identity elsewhere. Site 1 is the most
/// significant bit of the basis index.
Mat kron_embed(const Mat& local, const std::vector<int>& sites, int L);

/// Dense Hermitian eigendecomposition. Rejects non-Hermitian input.
SpectralDecomposition eigendecompose_hermitian(const Mat& h, double herm_tol = 1e-10);

/// exp(-i * scale * H) for Hermitian H, built from its eigendecomposition so
/// the result is unitary to machine precision regardless of scale.
Mat hermitian_exponential(const Mat& h, double scale);

/// Evolve psi0 for time t under the diagonalized Hamiltonian:
/// sum_n c_n exp(-i E_n t) |n>.
StateVector exact_evolve(const SpectralDecomposition& spec, const StateVector& psi0, double t);

/// Hermitian generator H_eff = i log(U) / dt with principal-branch phases.
/// Rejects eigenphases within `branch_margin` of the +-pi branch cut; shrink
/// dt until all eigenphases of U lie strictly inside (-pi, pi).
Mat unitary_log_generator(const Mat& u, double dt, double branch_margin = 1e-8);

}  // namespace trotter
