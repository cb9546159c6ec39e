#include "trotter/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace trotter {

Mat kron_embed(const Mat& local, const std::vector<int>& sites, int L) {
    const int k = int(sites.size());
    if (k < 1) throw std::invalid_argument("kron_embed: empty site list");
    for (int i = 0; i < k; ++i) {
        if (sites[i] < 1 || sites[i] > L) throw std::out_of_range("kron_embed: site out of range");
        if (i > 0 && sites[i] <= sites[i - 1])
            throw std::invalid_argument("kron_embed: sites must be strictly ascending");
    }
    const Eigen::Index m_dim = Eigen::Index(1) << k;
    if (local.rows() != m_dim || local.cols() != m_dim)
        throw std::invalid_argument("kron_embed: local dim is not 2^|sites|");

    const Eigen::Index dim = Eigen::Index(1) << L;
    Mat out = Mat::Zero(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row) {
        int lr = 0;
        for (int i = 0; i < k; ++i) lr = (lr << 1) | int((row >> (L - sites[i])) & 1);
        for (Eigen::Index lc = 0; lc < m_dim; ++lc) {
            if (local(lr, lc) == cxd(0.0, 0.0)) continue;
            Eigen::Index col = row;
            for (int i = 0; i < k; ++i) {
                const Eigen::Index bit = Eigen::Index(1) << (L - sites[i]);
                if ((lc >> (k - 1 - i)) & 1)
                    col |= bit;
                else
                    col &= ~bit;
            }
            out(row, col) = local(lr, lc);
        }
    }
    return out;
}

SpectralDecomposition eigendecompose_hermitian(const Mat& h, double herm_tol) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigendecompose: matrix not square");
    if (hermiticity_error(h) > herm_tol)
        throw std::invalid_argument("eigendecompose: input not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> solver((h + h.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: eigensolver did not converge");
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

Mat hermitian_exponential(const Mat& h, double scale) {
    SpectralDecomposition spec = eigendecompose_hermitian(h, 1e-9);
    Vec phases(spec.dim());
    for (Eigen::Index n = 0; n < spec.dim(); ++n)
        phases(n) = std::polar(1.0, -scale * spec.energies(n));
    return spec.basis * phases.asDiagonal() * spec.basis.adjoint();
}

StateVector exact_evolve(const SpectralDecomposition& spec, const StateVector& psi0, double t) {
    if (spec.dim() != psi0.dim())
        throw std::invalid_argument("exact_evolve: dimension mismatch");
    Vec c = spec.basis.adjoint() * psi0.amplitudes;
    for (Eigen::Index n = 0; n < spec.dim(); ++n) c(n) *= std::polar(1.0, -spec.energies(n) * t);
    return StateVector(psi0.n_qubits, spec.basis * c, psi0.unit_norm);
}

Mat unitary_log_generator(const Mat& u, double dt, double branch_margin) {
    if (dt <= 0.0) throw std::invalid_argument("unitary_log_generator: dt must be positive");
    if (!is_unitary(u, 1e-8))
        throw std::invalid_argument("unitary_log_generator: input not unitary");

    Eigen::ComplexEigenSolver<Mat> solver(u);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("unitary_log_generator: eigensolver did not converge");

    const Vec lambda = solver.eigenvalues();
    Vec theta(lambda.size());
    for (Eigen::Index n = 0; n < lambda.size(); ++n) {
        const double phase = std::arg(lambda(n));
        if (M_PI - std::abs(phase) < branch_margin)
            throw std::runtime_error(
                "unitary_log_generator: eigenphase at the +-pi branch cut; shrink dt");
        theta(n) = phase;
    }

    // H_eff = i log(U)/dt = -(1/dt) V diag(theta) V^{-1}. The eigenvector
    // matrix of a unitary is invertible but not exactly unitary numerically
    // (degenerate clusters), so use the inverse, then Hermitize.
    const Mat& v = solver.eigenvectors();
    Mat h = v * (-theta / dt).asDiagonal() * v.inverse();
    return (h + h.adjoint()) / 2.0;
}

}  // namespace trotter
