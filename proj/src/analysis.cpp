#include "trotter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trotter/kernels.hpp"

namespace trotter {

namespace {

constexpr double G_LIMIT_THRESHOLD = 1e-7;
constexpr int LADDER_MAX_SUPPORT = 64;   // states entering the fit
constexpr int LADDER_MAX_SOURCES = 24;   // states whose gaps seed candidates
constexpr int LADDER_MAX_DIVISOR = 12;
constexpr double LADDER_COVERAGE_MIN = 0.99;  // weight fraction on the lattice
constexpr double LADDER_ON_TOL = 0.05;        // on-ladder deviation, relative to omega

struct WeightedGap {
    double gap;
    double weight;
};

double gap_distance(double gap, double omega) {
    return std::abs(gap - omega * std::round(gap / omega));
}

// Relative RMS misfit of gaps against the lattice omega * Z.
double lattice_misfit(const std::vector<WeightedGap>& gaps, double omega) {
    double num = 0.0, den = 0.0;
    for (const WeightedGap& g : gaps) {
        const double d = gap_distance(g.gap, omega);
        num += g.weight * d * d;
        den += g.weight;
    }
    return den > 0.0 ? std::sqrt(num / den) / omega : 0.0;
}

// Closed-form weighted least squares for sum w (gap - k omega)^2 at fixed
// integer assignments, iterated a few times.
double refine_omega(const std::vector<WeightedGap>& gaps, double omega) {
    for (int pass = 0; pass < 4; ++pass) {
        double num = 0.0, den = 0.0;
        for (const WeightedGap& g : gaps) {
            const double k = std::round(g.gap / omega);
            num += g.weight * k * g.gap;
            den += g.weight * k * k;
        }
        if (den <= 0.0) break;
        const double next = num / den;
        if (!(next > 0.5 * omega && next < 2.0 * omega)) break;
        omega = next;
    }
    return omega;
}

std::vector<WeightedGap> pairwise_gaps(const std::vector<std::pair<double, double>>& states) {
    std::vector<WeightedGap> gaps;
    for (size_t i = 0; i < states.size(); ++i)
        for (size_t j = i + 1; j < states.size(); ++j) {
            const double g = std::abs(states[i].first - states[j].first);
            if (g > 1e-12) gaps.push_back({g, states[i].second * states[j].second});
        }
    return gaps;
}

// Members of the lattice E_anchor + omega * Z among the supported states.
std::vector<std::pair<double, double>> lattice_members(
    const std::vector<std::pair<double, double>>& supported, double anchor, double omega) {
    std::vector<std::pair<double, double>> members;
    for (const auto& state : supported)
        if (gap_distance(state.first - anchor, omega) <= LADDER_ON_TOL * omega)
            members.push_back(state);
    return members;
}

}  // namespace

double stroboscopic_g(double omega, double t) {
    if (std::abs(omega * t) < G_LIMIT_THRESHOLD) {
        const double x = omega * t / 2.0;
        return t * (1.0 - x * x / 6.0 + x * x * x * x / 120.0);
    }
    return 2.0 * std::sin(omega * t / 2.0) / omega;
}

std::vector<double> perturbative_error_series(const SpectralDecomposition& spec,
                                              const ErrorKernel& kernel, const StateVector& psi0,
                                              double dt, const std::vector<double>& times) {
    if (spec.dim() != psi0.dim() || kernel.matrix.rows() != spec.dim())
        throw std::invalid_argument("perturbative_error: dimension mismatch");

    const Mat ktilde = spec.basis.adjoint() * kernel.matrix * spec.basis;
    const Vec c = spec.basis.adjoint() * psi0.amplitudes;
    const Eigen::Index dim = spec.dim();
    const double prefactor = std::pow(dt, kernel.order);

    std::vector<double> out(times.size(), 0.0);
#pragma omp parallel for schedule(static) if (times.size() > 8 && dim >= 64)
    for (Eigen::Index i = 0; i < Eigen::Index(times.size()); ++i) {
        const double t = times[size_t(i)];
        double total = 0.0;
        for (Eigen::Index n = 0; n < dim; ++n) {
            cxd inner{0.0, 0.0};
            for (Eigen::Index m = 0; m < dim; ++m) {
                const double w = spec.energies(n) - spec.energies(m);
                inner += c(m) * ktilde(n, m) * std::polar(stroboscopic_g(w, t), w * t / 2.0);
            }
            total += std::norm(inner);
        }
        out[size_t(i)] = prefactor * std::sqrt(total);
    }
    return out;
}

double perturbative_error(const SpectralDecomposition& spec, const ErrorKernel& kernel,
                          const StateVector& psi0, double dt, double t) {
    return perturbative_error_series(spec, kernel, psi0, dt, {t})[0];
}

std::vector<double> loschmidt_exact(const SpectralDecomposition& spec, const StateVector& psi0,
                                    const std::vector<double>& times) {
    if (spec.dim() != psi0.dim()) throw std::invalid_argument("loschmidt_exact: dimension mismatch");
    const Vec c = spec.basis.adjoint() * psi0.amplitudes;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        cxd amp{0.0, 0.0};
        for (Eigen::Index n = 0; n < spec.dim(); ++n)
            amp += std::norm(c(n)) * std::polar(1.0, -spec.energies(n) * t);
        out.push_back(std::norm(amp));
    }
    return out;
}

std::vector<double> loschmidt_trotter(const StateVector& psi0,
                                      const std::vector<StateVector>& trajectory) {
    std::vector<double> out;
    out.reserve(trajectory.size());
    for (const StateVector& state : trajectory)
        out.push_back(std::norm(psi0.amplitudes.dot(state.amplitudes)));
    return out;
}

LadderReport ladder_report(const SpectralDecomposition& spec, const StateVector& psi0,
                           double weight_cutoff, int top_k, double omega_min) {
    if (weight_cutoff <= 0.0 || weight_cutoff >= 1.0)
        throw std::invalid_argument("ladder_report: weight_cutoff must be in (0, 1)");
    if (top_k < 2) throw std::invalid_argument("ladder_report: top_k must be >= 2");
    if (spec.dim() != psi0.dim()) throw std::invalid_argument("ladder_report: dimension mismatch");

    const Vec c = spec.basis.adjoint() * psi0.amplitudes;
    std::vector<std::pair<double, double>> weighted;  // (E_n, weight)
    for (Eigen::Index n = 0; n < spec.dim(); ++n)
        weighted.emplace_back(spec.energies(n), std::norm(c(n)));
    std::stable_sort(weighted.begin(), weighted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    LadderReport report;
    for (int i = 0; i < top_k && i < int(weighted.size()); ++i)
        report.top_overlaps.push_back(weighted[size_t(i)]);

    std::vector<std::pair<double, double>> supported;
    for (const auto& [e, w] : weighted) {
        if (w < weight_cutoff || int(supported.size()) >= LADDER_MAX_SUPPORT) break;
        supported.emplace_back(e, w);
    }
    if (supported.size() < 2) return report;  // frequency undefined

    const std::vector<WeightedGap> all_gaps = pairwise_gaps(supported);
    if (all_gaps.empty()) return report;  // fully degenerate support

    double total_weight = 0.0;
    for (const auto& [e, w] : supported) total_weight += w;
    const double anchor = supported.front().first;  // heaviest state

    std::vector<double> candidates;
    const size_t n_src = std::min(supported.size(), size_t(LADDER_MAX_SOURCES));
    for (size_t i = 0; i < n_src; ++i)
        for (size_t j = i + 1; j < n_src; ++j) {
            const double g = std::abs(supported[i].first - supported[j].first);
            if (g <= 1e-12) continue;
            for (int k = 1; k <= LADDER_MAX_DIVISOR; ++k) {
                const double omega = g / k;
                if (omega >= omega_min && omega > 1e-9) candidates.push_back(omega);
            }
        }
    if (candidates.empty()) return report;
    std::sort(candidates.begin(), candidates.end(), std::greater<double>());

    // A ladder at omega is also one at omega/k, so walk candidates from the
    // largest down and accept the first whose anchored lattice carries at
    // least LADDER_COVERAGE_MIN of the supported weight; stragglers below
    // that fraction are treated as off-ladder and excluded from the fit.
    double chosen = 0.0;
    std::vector<std::pair<double, double>> members;
    double last_tried = -1.0;
    for (double omega : candidates) {
        if (last_tried > 0.0 && std::abs(omega - last_tried) < 1e-6 * omega) continue;
        last_tried = omega;
        double refined = omega;
        std::vector<std::pair<double, double>> on;
        for (int pass = 0; pass < 3; ++pass) {
            on = lattice_members(supported, anchor, refined);
            if (on.size() < 2) break;
            refined = refine_omega(pairwise_gaps(on), refined);
        }
        if (on.size() < 2 || refined < omega_min) continue;
        double on_weight = 0.0;
        for (const auto& [e, w] : on) on_weight += w;
        if (on_weight >= LADDER_COVERAGE_MIN * total_weight) {
            chosen = refined;
            members = on;
            break;
        }
    }

    if (chosen <= 0.0) {
        // No dominant lattice: fall back to the global weighted misfit over
        // every supported pair, so the large residual flags the state as
        // incommensurate.
        double best_misfit = std::numeric_limits<double>::infinity();
        last_tried = -1.0;
        for (double omega : candidates) {
            if (last_tried > 0.0 && std::abs(omega - last_tried) < 1e-6 * omega) continue;
            last_tried = omega;
            const double refined = refine_omega(all_gaps, omega);
            if (refined < omega_min) continue;
            const double misfit = lattice_misfit(all_gaps, refined);
            if (misfit < best_misfit) {
                best_misfit = misfit;
                chosen = refined;
            }
        }
        if (chosen <= 0.0) return report;
        members = supported;
    }

    report.omega_defined = true;
    report.omega = chosen;
    for (int p = 1; p <= 5; ++p) report.strobe_times.push_back(2.0 * M_PI * p / chosen);
    report.residual = 0.0;
    for (const WeightedGap& g : pairwise_gaps(members))
        report.residual = std::max(report.residual, gap_distance(g.gap, chosen));
    return report;
}

StateVector commensurate_ladder_state(const SpectralDecomposition& spec, double omega, double tol,
                                      int max_members) {
    if (omega <= 0.0) throw std::invalid_argument("commensurate_ladder_state: omega must be > 0");
    const Eigen::Index dim = spec.dim();
    const int L = int(std::lround(std::log2(double(dim))));
    if ((Eigen::Index(1) << L) != dim)
        throw std::invalid_argument("commensurate_ladder_state: dimension is not a power of two");

    std::vector<Eigen::Index> best;
    for (Eigen::Index ref = 0; ref < dim && int(best.size()) < max_members; ++ref) {
        std::vector<Eigen::Index> members;
        std::vector<long> taken;
        for (Eigen::Index n = 0; n < dim; ++n) {
            const double d = spec.energies(n) - spec.energies(ref);
            const long k = std::lround(d / omega);
            if (std::abs(d - double(k) * omega) > tol) continue;
            if (std::find(taken.begin(), taken.end(), k) != taken.end()) continue;
            members.push_back(n);
            taken.push_back(k);
            if (int(members.size()) >= max_members) break;
        }
        if (members.size() > best.size()) best = members;
    }
    if (best.size() < 2)
        throw std::runtime_error("commensurate_ladder_state: no commensurate pair within tol");

    Vec amps = Vec::Zero(dim);
    for (Eigen::Index n : best) amps += spec.basis.col(n);
    amps /= amps.norm();
    return StateVector(L, amps);
}

std::array<double, 3> local_expectations(const StateVector& psi, int site) {
    if (site < 1 || site > psi.n_qubits)
        throw std::out_of_range("local_expectations: site out of range");
    std::array<double, 3> out{};
    const Mat paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
    for (int a = 0; a < 3; ++a) {
        Vec rotated = psi.amplitudes;
        kernels::apply_local(rotated, psi.n_qubits, {site}, paulis[a]);
        out[size_t(a)] = psi.amplitudes.dot(rotated).real();
    }
    return out;
}

double total_spin_expectation(const StateVector& psi) {
    const int L = psi.n_qubits;

    // S^2 = (3L/4) I + 2 sum_{j<k} S_j . S_k; apply each pair coupling as a
    // two-site gate so no 2^L x 2^L matrix is ever formed.
    Mat pair_coupling = Mat::Zero(4, 4);
    for (const Mat& pauli : {pauli_x(), pauli_y(), pauli_z()}) {
        const Mat s = pauli / 2.0;
        Mat term(4, 4);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) term(2 * a + c, 2 * b + d) = s(a, b) * s(c, d);
        pair_coupling += term;
    }

    double value = 0.75 * L;
    for (int j = 1; j <= L; ++j)
        for (int k = j + 1; k <= L; ++k) {
            Vec coupled = psi.amplitudes;
            kernels::apply_local(coupled, L, {j, k}, pair_coupling);
            value += 2.0 * psi.amplitudes.dot(coupled).real();
        }
    return value;
}

TrajectoryRecord record_trajectory(const SplitHamiltonian& ham,
                                   const ProductFormulaSchedule& schedule, double dt, int n_steps,
                                   int stride, const StateVector& psi0,
                                   const SpectralDecomposition& spec, const ErrorKernel* kernel,
                                   const std::vector<int>& tracked_sites) {
    if (stride < 1) throw std::invalid_argument("record_trajectory: stride must be >= 1");
    TrajectoryRecord rec;
    rec.tracked_sites = tracked_sites;
    rec.bloch.resize(tracked_sites.size());

    const Vec c0 = spec.basis.adjoint() * psi0.amplitudes;
    auto exact_state = [&](double t) {
        Vec phased = c0;
        for (Eigen::Index n = 0; n < spec.dim(); ++n)
            phased(n) *= std::polar(1.0, -spec.energies(n) * t);
        return Vec(spec.basis * phased);
    };

    TrotterPropagator prop(ham, schedule, dt);
    Vec amps = psi0.amplitudes;
    for (int n = 0; n <= n_steps; ++n) {
        if (n > 0) prop.step(amps);
        if (n % stride != 0 && n != n_steps) continue;
        const double t = n * dt;
        rec.times.push_back(t);
        rec.loschmidt_trotter.push_back(std::norm(psi0.amplitudes.dot(amps)));

        cxd echo_amp{0.0, 0.0};
        for (Eigen::Index m = 0; m < spec.dim(); ++m)
            echo_amp += std::norm(c0(m)) * std::polar(1.0, -spec.energies(m) * t);
        rec.loschmidt_exact.push_back(std::norm(echo_amp));

        const Vec ideal = n == 0 ? psi0.amplitudes : exact_state(t);
        rec.trotter_error.push_back(n == 0 ? 0.0 : (ideal - amps).norm());

        const StateVector exact_now(psi0.n_qubits, ideal);
        for (size_t s = 0; s < tracked_sites.size(); ++s)
            rec.bloch[s].push_back(local_expectations(exact_now, tracked_sites[s]));
    }

    if (kernel)
        rec.predicted_error = perturbative_error_series(spec, *kernel, psi0, dt, rec.times);
    return rec;
}

}  // namespace trotter
