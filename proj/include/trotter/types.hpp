#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace trotter {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr cxd IMAG_I{0.0, 1.0};

/// Normalized complex amplitude vector on 2^L computational basis states.
///
/// Bit-ordering convention, fixed project-wide: site 1 is the most
/// significant bit, so site j maps to bit position (L - j) of the basis
/// index. Difference vectors (e.g. ideal minus Trotterized state) are not
/// normalized and carry unit_norm = false.
struct StateVector {
    int n_qubits = 0;
    Vec amplitudes;
    bool unit_norm = true;

    StateVector() = default;
    StateVector(int L, Vec amps, bool normalized = true)
        : n_qubits(L), amplitudes(std::move(amps)), unit_norm(normalized) {
        if (amplitudes.size() != (Eigen::Index(1) << L))
            throw std::invalid_argument("StateVector: amplitude length is not 2^L");
    }

    Eigen::Index dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }

    /// All-zeros computational basis state |00...0>.
    static StateVector zero_state(int L) {
        Vec a = Vec::Zero(Eigen::Index(1) << L);
        a(0) = 1.0;
        return StateVector(L, std::move(a));
    }

    /// Basis state from per-site bits (site 1 first).
    static StateVector basis_state(int L, const std::vector<int>& bits) {
        if (int(bits.size()) != L)
            throw std::invalid_argument("basis_state: need one bit per site");
        Eigen::Index idx = 0;
        for (int j = 0; j < L; ++j) idx = (idx << 1) | (bits[j] & 1);
        Vec a = Vec::Zero(Eigen::Index(1) << L);
        a(idx) = 1.0;
        return StateVector(L, std::move(a));
    }

    void require_normalized(double tol = 1e-10) const {
        if (!unit_norm) return;
        if (std::abs(norm() - 1.0) > tol)
            throw std::runtime_error("StateVector: norm deviates from 1 by more than tolerance");
    }
};

inline Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat pauli_y() {
    Mat m(2, 2);
    m << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
    return m;
}
inline Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline Mat identity2() { return Mat::Identity(2, 2); }

inline double hermiticity_error(const Mat& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline double unitarity_error(const Mat& a) {
    return (a.adjoint() * a - Mat::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Mat& a, double tol = 1e-12) {
    return a.rows() == a.cols() && hermiticity_error(a) < tol;
}

inline bool is_unitary(const Mat& a, double tol = 1e-10) {
    return a.rows() == a.cols() && unitarity_error(a) < tol;
}

}  // namespace trotter
