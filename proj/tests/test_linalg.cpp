#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <random>

#include "oracles.hpp"
#include "trotter/kernels.hpp"
#include "trotter/linalg.hpp"

using namespace trotter;

namespace {

Mat random_hermitian(Eigen::Index dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = cxd(normal(rng), normal(rng));
    return (a + a.adjoint()) / 2.0;
}

// Heisenberg L=2 bond, assembled from per-site factors only.
Mat heisenberg2() {
    const Mat sx = pauli_x() / 2.0, sy = pauli_y() / 2.0, sz = pauli_z() / 2.0;
    return oracle::embed2(sx, 1, sx, 2, 2) + oracle::embed2(sy, 1, sy, 2, 2) +
           oracle::embed2(sz, 1, sz, 2, 2);
}

}  // namespace

TEST_CASE("kron_embed identity embedding at L=1") {
    const Mat out = kron_embed(pauli_x(), {1}, 1);
    CHECK((out - pauli_x()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron_embed places site 2 of L=2 on the least significant bit") {
    const Mat out = kron_embed(pauli_z(), {2}, 2);
    Mat expected = Mat::Zero(4, 4);
    expected.diagonal() << 1, -1, 1, -1;
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("kron_embed two-site operator matches brute-force tensor product") {
    const Mat local = Eigen::kroneckerProduct(pauli_x(), pauli_x()).eval();
    const Mat out = kron_embed(local, {1, 2}, 3);
    const Mat expected = oracle::embed2(pauli_x(), 1, pauli_x(), 2, 3);
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-15);

    const Mat gap = kron_embed(local, {1, 3}, 3);
    const Mat gap_expected = oracle::embed2(pauli_x(), 1, pauli_x(), 3, 3);
    CHECK((gap - gap_expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("kron_embed rejects bad inputs") {
    CHECK_THROWS(kron_embed(pauli_x(), {0}, 2));
    CHECK_THROWS(kron_embed(pauli_x(), {3}, 2));
    CHECK_THROWS(kron_embed(pauli_x(), {1, 2}, 3));  // dim mismatch
    CHECK_THROWS(kron_embed(Mat::Identity(4, 4), {2, 1}, 3));
}

TEST_CASE("local gate kernels agree with dense embedding and each other") {
    std::mt19937 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int L = 6;
    const Eigen::Index dim = 1 << L;

    const std::vector<std::vector<int>> supports = {{3}, {1}, {6}, {2, 3}, {1, 6}, {2, 4, 5}};
    for (const auto& sites : supports) {
        const Eigen::Index g = Eigen::Index(1) << sites.size();
        Mat gate(g, g);
        for (Eigen::Index r = 0; r < g; ++r)
            for (Eigen::Index c = 0; c < g; ++c) gate(r, c) = cxd(normal(rng), normal(rng));

        const Vec psi = oracle::random_state(dim, 1234 + unsigned(sites[0]));
        Vec fast = psi, slow = psi;
        kernels::apply_local(fast, L, sites, gate);
        kernels::serial::apply_local(slow, L, sites, gate);
        const Vec dense = kron_embed(gate, sites, L) * psi;

        CHECK((fast - dense).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((slow - dense).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("eigendecompose_hermitian sorts and reconstructs") {
    Mat d = Mat::Zero(3, 3);
    d.diagonal() << 3, 1, 2;
    const auto spec = eigendecompose_hermitian(d);
    CHECK(spec.energies(0) == doctest::Approx(1.0));
    CHECK(spec.energies(1) == doctest::Approx(2.0));
    CHECK(spec.energies(2) == doctest::Approx(3.0));

    const auto sx = eigendecompose_hermitian(pauli_x());
    CHECK(sx.energies(0) == doctest::Approx(-1.0));
    CHECK(sx.energies(1) == doctest::Approx(1.0));

    const auto h2 = eigendecompose_hermitian(heisenberg2());
    CHECK(h2.energies(0) == doctest::Approx(-0.75));
    CHECK(h2.energies(1) == doctest::Approx(0.25));
    CHECK(h2.energies(3) == doctest::Approx(0.25));

    CHECK_THROWS(eigendecompose_hermitian(Mat::Random(4, 4)));
}

TEST_CASE("eigendecomposition residual stays below 1e-9 * ||H|| up to dim 16") {
    for (Eigen::Index dim : {2, 5, 8, 16}) {
        const Mat h = random_hermitian(dim, 100 + unsigned(dim));
        const auto spec = eigendecompose_hermitian(h);
        const Mat reconstructed =
            spec.basis * spec.energies.cast<cxd>().asDiagonal() * spec.basis.adjoint();
        CHECK((reconstructed - h).cwiseAbs().maxCoeff() < 1e-9 * h.norm());
        const Mat diag = spec.basis.adjoint() * h * spec.basis;
        CHECK((diag - Mat(spec.energies.cast<cxd>().asDiagonal())).cwiseAbs().maxCoeff() <
              1e-9 * h.norm());
    }
}

TEST_CASE("exact_evolve fixed points and phases") {
    const Mat h = heisenberg2();
    const auto spec = eigendecompose_hermitian(h);

    StateVector psi(2, oracle::random_state(4, 42));
    const StateVector same = exact_evolve(spec, psi, 0.0);
    CHECK((same.amplitudes - psi.amplitudes).norm() < 1e-14);

    StateVector eigenstate(2, spec.basis.col(0));
    const StateVector rotated = exact_evolve(spec, eigenstate, 1.3);
    const cxd overlap = eigenstate.amplitudes.dot(rotated.amplitudes);
    CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);
    CHECK(std::abs(overlap - std::polar(1.0, -spec.energies(0) * 1.3)) < 1e-12);
}

TEST_CASE("exact_evolve matches an RK4 integration at L=3") {
    const Mat sx = pauli_x() / 2.0, sy = pauli_y() / 2.0, sz = pauli_z() / 2.0;
    Mat h = Mat::Zero(8, 8);
    for (int j = 1; j <= 2; ++j)
        h += oracle::embed2(sx, j, sx, j + 1, 3) + oracle::embed2(sy, j, sy, j + 1, 3) +
             oracle::embed2(sz, j, sz, j + 1, 3);
    for (int j = 1; j <= 3; ++j) h += 0.5 * oracle::embed1(sx, j, 3);

    const auto spec = eigendecompose_hermitian(h);
    const StateVector psi0(3, oracle::random_state(8, 9));
    const StateVector evolved = exact_evolve(spec, psi0, 1.7);
    const Vec reference = oracle::rk4_evolve(h, psi0.amplitudes, 1.7, 1e-4);
    CHECK((evolved.amplitudes - reference).norm() < 1e-6);
    CHECK(std::abs(evolved.norm() - 1.0) < 1e-12);
}

TEST_CASE("exact_evolve composes over time (group property)") {
    const Mat h = random_hermitian(8, 77);
    const auto spec = eigendecompose_hermitian(h);
    const StateVector psi(3, oracle::random_state(8, 78));
    const StateVector one = exact_evolve(spec, psi, 2.9);
    const StateVector two = exact_evolve(spec, exact_evolve(spec, psi, 1.2), 1.7);
    CHECK((one.amplitudes - two.amplitudes).norm() < 1e-10);
}

TEST_CASE("unitary_log_generator recovers Hermitian generators") {
    const Mat zero = unitary_log_generator(Mat::Identity(4, 4), 0.5);
    CHECK(zero.cwiseAbs().maxCoeff() < 1e-12);

    const Mat u = hermitian_exponential(pauli_z(), 0.3);
    const Mat gen = unitary_log_generator(u, 0.3);
    CHECK((gen - pauli_z()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unitary_log_generator inverts the exponential below the branch cut") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const Mat h = random_hermitian(8, 300 + seed);
        const double radius =
            Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().cwiseAbs().maxCoeff();
        const double dt = 2.0 / radius;  // spectral radius * dt = 2 < pi
        const Mat u = hermitian_exponential(h, dt);
        const Mat recovered = unitary_log_generator(u, dt);
        CHECK((recovered - h).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, h.norm()));
        const Mat round_trip = hermitian_exponential(recovered, dt);
        CHECK((round_trip - u).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("unitary_log_generator rejects eigenphases at the branch cut") {
    // exp(-i pi Z) has both eigenphases exactly at +-pi.
    const Mat u = hermitian_exponential(pauli_z(), M_PI);
    CHECK_THROWS(unitary_log_generator(u, M_PI));
    CHECK_THROWS(unitary_log_generator(pauli_x(), 0.0));
}

TEST_CASE("hermitian_exponential matches a Pade-based exponential") {
    const Mat h = random_hermitian(8, 55);
    const Mat ours = hermitian_exponential(h, 0.37);
    const Mat pade = oracle::pade_exponential(h, 0.37);
    CHECK((ours - pade).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(unitarity_error(ours) < 1e-13);
}
