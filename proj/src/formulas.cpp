#include "trotter/formulas.hpp"

#include <algorithm>
#include <cmath>

#include "trotter/kernels.hpp"

namespace trotter {

namespace {

std::vector<Layer> merge_adjacent(std::vector<Layer> layers) {
    std::vector<Layer> merged;
    for (const Layer& layer : layers) {
        if (!merged.empty() && merged.back().group == layer.group)
            merged.back().coeff += layer.coeff;
        else
            merged.push_back(layer);
    }
    return merged;
}

std::vector<Layer> scaled(const std::vector<Layer>& layers, double factor) {
    std::vector<Layer> out = layers;
    for (Layer& layer : out) layer.coeff *= factor;
    return out;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

double spectral_radius(const Mat& hermitian) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double ProductFormulaSchedule::coefficient_sum(Group g) const {
    double s = 0.0;
    for (const Layer& layer : layers)
        if (layer.group == g) s += layer.coeff;
    return s;
}

bool ProductFormulaSchedule::is_palindromic(double tol) const {
    const size_t n = layers.size();
    for (size_t i = 0; i < n / 2; ++i) {
        const Layer& a = layers[i];
        const Layer& b = layers[n - 1 - i];
        if (a.group != b.group || std::abs(a.coeff - b.coeff) > tol) return false;
    }
    return true;
}

double suzuki_p(int k) {
    if (k < 1) throw std::invalid_argument("suzuki_p: k must be >= 1");
    return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k + 1.0)));
}

double suzuki_s(int k) { return 1.0 - 4.0 * suzuki_p(k); }

ProductFormulaSchedule suzuki_schedule(int k) {
    if (k < 0) throw std::invalid_argument("suzuki_schedule: k must be >= 0");
    if (k == 0) return {1, {{Group::odd, 1.0}, {Group::even, 1.0}}};
    if (k == 1) return {2, {{Group::odd, 0.5}, {Group::even, 1.0}, {Group::odd, 0.5}}};

    const ProductFormulaSchedule inner = suzuki_schedule(k - 1);
    const double p = suzuki_p(k - 1);
    const double s = suzuki_s(k - 1);

    std::vector<Layer> layers;
    auto append = [&](double factor) {
        const std::vector<Layer> part = scaled(inner.layers, factor);
        layers.insert(layers.end(), part.begin(), part.end());
    };
    append(p);
    append(p);
    append(s);
    append(p);
    append(p);
    return {2 * k, merge_adjacent(std::move(layers))};
}

ProductFormulaSchedule schedule_for_order(int q) {
    if (q == 1) return suzuki_schedule(0);
    if (q >= 2 && q % 2 == 0) return suzuki_schedule(q / 2);
    throw std::invalid_argument("schedule_for_order: order must be 1 or even");
}

StateVector apply_group_exponential(const std::vector<LocalTerm>& terms, double coeff_dt,
                                    const StateVector& psi) {
    StateVector out = psi;
    for (const LocalTerm& term : terms) {
        const Mat gate = hermitian_exponential(term.matrix, coeff_dt);
        kernels::apply_local(out.amplitudes, out.n_qubits, term.sites, gate);
    }
    return out;
}

TrotterPropagator::TrotterPropagator(const SplitHamiltonian& ham,
                                     const ProductFormulaSchedule& schedule, double dt)
    : L_(ham.L), dt_(dt), ham_(&ham), schedule_(schedule) {
    if (dt <= 0.0) throw std::invalid_argument("TrotterPropagator: dt must be positive");
    // Layers are listed in operator order (leftmost factor first), so the
    // state sees them in reverse.
    for (auto it = schedule_.layers.rbegin(); it != schedule_.layers.rend(); ++it)
        for (const LocalTerm& term : ham.group(it->group)) {
            Mat fwd = hermitian_exponential(term.matrix, it->coeff * dt);
            gates_.push_back({term.sites, fwd, fwd.adjoint()});
        }
}

void TrotterPropagator::step(Vec& amps) const {
    for (const Gate& gate : gates_) kernels::apply_local(amps, L_, gate.sites, gate.forward);
}

void TrotterPropagator::step_adjoint(Vec& amps) const {
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it)
        kernels::apply_local(amps, L_, it->sites, it->adjoint);
}

Mat TrotterPropagator::step_matrix() const {
    const Eigen::Index dim = Eigen::Index(1) << L_;
    Mat u = Mat::Identity(dim, dim);
    for (const Layer& layer : schedule_.layers)
        u = u * hermitian_exponential(ham_->group_matrix(layer.group), layer.coeff * dt_);
    return u;
}

std::vector<StateVector> trotter_evolve(const SplitHamiltonian& ham,
                                        const ProductFormulaSchedule& schedule, double dt,
                                        int n_steps, const StateVector& psi0) {
    if (n_steps < 0) throw std::invalid_argument("trotter_evolve: n_steps must be >= 0");
    if (psi0.dim() != (Eigen::Index(1) << ham.L))
        throw std::invalid_argument("trotter_evolve: state dimension mismatch");

    std::vector<StateVector> trajectory;
    trajectory.reserve(size_t(n_steps) + 1);
    trajectory.push_back(psi0);
    if (n_steps == 0) return trajectory;

    TrotterPropagator prop(ham, schedule, dt);
    Vec amps = psi0.amplitudes;
    for (int n = 0; n < n_steps; ++n) {
        prop.step(amps);
        trajectory.emplace_back(psi0.n_qubits, amps, psi0.unit_norm);
    }
    return trajectory;
}

ErrorKernel error_kernel(const SplitHamiltonian& ham, int order) {
    const Mat ho = ham.group_matrix(Group::odd);
    const Mat he = ham.group_matrix(Group::even);

    if (order == 1) return {1, cxd(0.0, -0.5) * commutator(ho, he)};

    const Mat inner = commutator(ho, he);
    const Mat k2 = (commutator(ho, inner) + 2.0 * commutator(he, inner)) / 24.0;
    if (order == 2) return {2, k2};

    if (order == 4) {
        const Mat h = ho + he;
        const double p = suzuki_p(1);
        const double s = suzuki_s(1);

        // W5 is the dt^5 coefficient of log S2(dt): evaluate
        // (H_eff(dt) - H - dt^2 K2)/dt^4 at two steps and Richardson-combine
        // to cancel the dt^2 correction.
        const ProductFormulaSchedule s2 = suzuki_schedule(1);
        const double radius = spectral_radius(h);
        const double dt0 = std::min(0.05, 1.0 / std::max(radius, 1.0));
        auto w5_estimate = [&](double dt) -> Mat {
            const Mat heff = unitary_log_generator(TrotterPropagator(ham, s2, dt).step_matrix(), dt);
            return (heff - h - dt * dt * k2) / std::pow(dt, 4);
        };
        const Mat w5 = (4.0 * w5_estimate(dt0 / 2.0) - w5_estimate(dt0)) / 3.0;

        const double direct = 4.0 * std::pow(p, 5) + std::pow(s, 5);
        const double cross = p * s * (2.0 * p + s) * (p * p - s * s) / 3.0;
        Mat k4 = direct * w5 - cross * commutator(h, commutator(h, k2));
        return {4, (k4 + Mat(k4.adjoint())) / 2.0};
    }
    throw std::invalid_argument("error_kernel: explicit kernels exist for orders 1, 2, 4");
}

std::vector<double> measured_trotter_error(const SplitHamiltonian& ham,
                                           const ProductFormulaSchedule& schedule, double dt,
                                           const StateVector& psi0,
                                           const std::vector<double>& times,
                                           const SpectralDecomposition* spec) {
    std::vector<long> steps(times.size());
    long max_step = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        const double ratio = times[i] / dt;
        const long n = std::lround(ratio);
        if (n < 0 || std::abs(times[i] - double(n) * dt) > 1e-9)
            throw std::invalid_argument(
                "measured_trotter_error: time is not an integer multiple of dt");
        steps[i] = n;
        max_step = std::max(max_step, n);
    }

    SpectralDecomposition local_spec;
    if (!spec) {
        local_spec = eigendecompose_hermitian(ham.full_matrix());
        spec = &local_spec;
    }

    std::vector<double> errors(times.size(), 0.0);
    TrotterPropagator prop(ham, schedule, dt);
    Vec amps = psi0.amplitudes;
    for (long n = 0; n <= max_step; ++n) {
        if (n > 0) prop.step(amps);
        for (size_t i = 0; i < times.size(); ++i) {
            if (steps[i] != n) continue;
            if (n == 0) continue;  // both states are psi0, error exactly 0
            const StateVector ideal = exact_evolve(*spec, psi0, times[i]);
            errors[i] = (ideal.amplitudes - amps).norm();
        }
    }
    return errors;
}

}  // namespace trotter
