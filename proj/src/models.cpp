#include "trotter/models.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <set>

#include "trotter/linalg.hpp"

namespace trotter {

namespace {

constexpr double GROUP_COMMUTATOR_TOL = 1e-12;
constexpr int COMMUTATOR_CHECK_MAX_L = 10;

Mat kron2(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b); }

// Commutator of two local terms restricted to their joint support.
double support_commutator_norm(const LocalTerm& a, const LocalTerm& b) {
    std::set<int> support(a.sites.begin(), a.sites.end());
    support.insert(b.sites.begin(), b.sites.end());
    std::vector<int> joint(support.begin(), support.end());
    const int m = int(joint.size());

    auto relabel = [&](const std::vector<int>& sites) {
        std::vector<int> out;
        for (int s : sites)
            out.push_back(1 + int(std::lower_bound(joint.begin(), joint.end(), s) - joint.begin()));
        return out;
    };
    Mat ea = kron_embed(a.matrix, relabel(a.sites), m);
    Mat eb = kron_embed(b.matrix, relabel(b.sites), m);
    return (ea * eb - eb * ea).cwiseAbs().maxCoeff();
}

bool supports_disjoint(const LocalTerm& a, const LocalTerm& b) {
    for (int s : a.sites)
        if (std::find(b.sites.begin(), b.sites.end(), s) != b.sites.end()) return false;
    return true;
}

void check_group_commutes(const std::vector<LocalTerm>& terms, const char* label) {
    for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = i + 1; j < terms.size(); ++j) {
            if (supports_disjoint(terms[i], terms[j])) continue;
            const double c = support_commutator_norm(terms[i], terms[j]);
            if (c > GROUP_COMMUTATOR_TOL)
                throw std::logic_error(std::string("SplitHamiltonian: non-commuting pair in ") +
                                       label + " group, commutator norm " + std::to_string(c));
        }
}

void validate_split(const SplitHamiltonian& ham) {
    if (ham.L <= COMMUTATOR_CHECK_MAX_L) {
        check_group_commutes(ham.odd_terms, "odd");
        check_group_commutes(ham.even_terms, "even");
    }
}

// Field weight of a site within one of its adjacent bonds: full at the chain
// ends, half for interior sites (which appear in two bonds).
double field_weight(int site, int L) { return (site == 1 || site == L) ? 1.0 : 0.5; }

}  // namespace

double ModelSpec::strobe_time(int p) const {
    if (omega <= 0.0) throw std::domain_error("ModelSpec: no ladder frequency defined");
    return 2.0 * M_PI * p / omega;
}

Mat SplitHamiltonian::group_matrix(Group g) const {
    const Eigen::Index dim = Eigen::Index(1) << L;
    Mat h = Mat::Zero(dim, dim);
    for (const auto& term : group(g)) h += kron_embed(term.matrix, term.sites, L);
    return h;
}

Mat SplitHamiltonian::full_matrix() const {
    return group_matrix(Group::odd) + group_matrix(Group::even);
}

SplitHamiltonian build_heisenberg(int L, double h_x) {
    if (L < 2) throw std::invalid_argument("build_heisenberg: L must be >= 2");

    const Mat sx = pauli_x() / 2.0, sy = pauli_y() / 2.0, sz = pauli_z() / 2.0;
    const Mat id = identity2();
    const Mat bond = kron2(sx, sx) + kron2(sy, sy) + kron2(sz, sz);

    SplitHamiltonian ham;
    ham.L = L;
    for (int j = 1; j <= L - 1; ++j) {
        Mat m = bond;
        m += h_x * field_weight(j, L) * kron2(sx, id);
        m += h_x * field_weight(j + 1, L) * kron2(id, sx);
        LocalTerm term{{j, j + 1}, m};
        (j % 2 == 1 ? ham.odd_terms : ham.even_terms).push_back(std::move(term));
    }
    ham.model_spec = ModelSpec{
        "heisenberg", {{"h_x", h_x}}, h_x, "within a total-spin multiplet"};
    validate_split(ham);
    return ham;
}

SplitHamiltonian build_stark(int L, double j_x, double h_x, double h_y, double h_z) {
    if (L < 2) throw std::invalid_argument("build_stark: L must be >= 2");

    const Mat id = identity2();
    auto site_field = [&](int site) -> Mat {
        return h_x * pauli_x() + h_y * pauli_y() + double(site) * h_z * pauli_z();
    };

    SplitHamiltonian ham;
    ham.L = L;
    for (int j = 1; j <= L - 1; ++j) {
        Mat m = j_x * kron2(pauli_x(), pauli_x());
        m += field_weight(j, L) * kron2(site_field(j), id);
        m += field_weight(j + 1, L) * kron2(id, site_field(j + 1));
        LocalTerm term{{j, j + 1}, m};
        (j % 2 == 1 ? ham.odd_terms : ham.even_terms).push_back(std::move(term));
    }
    ham.model_spec = ModelSpec{"stark",
                               {{"j_x", j_x}, {"h_x", h_x}, {"h_y", h_y}, {"h_z", h_z}},
                               2.0 * h_z,
                               "for the dominant Stark ladder; exact at j_x = h_x = h_y = 0"};
    validate_split(ham);
    return ham;
}

SplitHamiltonian build_pxp(int L) {
    if (L < 3) throw std::invalid_argument("build_pxp: L must be >= 3");

    const Mat proj = (identity2() - pauli_z()) / 2.0;  // projects onto |1>
    const Mat term_matrix = kron2(proj, kron2(pauli_x(), proj));

    SplitHamiltonian ham;
    ham.L = L;
    for (int j = 2; j <= L - 1; ++j) {
        LocalTerm term{{j - 1, j, j + 1}, term_matrix};
        (j % 2 == 1 ? ham.odd_terms : ham.even_terms).push_back(std::move(term));
    }
    ham.model_spec =
        ModelSpec{"pxp", {}, 1.0, "within isolated-active-site invariant subspaces"};
    validate_split(ham);
    return ham;
}

SplitHamiltonian build_model(const std::string& name, int L,
                             const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto reject_unknown = [&](std::initializer_list<std::string> known) {
        for (const auto& [key, value] : params) {
            (void)value;
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw std::invalid_argument("build_model: unknown parameter '" + key + "' for " +
                                            name);
        }
    };
    if (name == "heisenberg") {
        reject_unknown({"h_x"});
        return build_heisenberg(L, get("h_x", 0.5));
    }
    if (name == "stark") {
        reject_unknown({"j_x", "h_x", "h_y", "h_z"});
        return build_stark(L, get("j_x", 1.0), get("h_x", 0.8), get("h_y", 0.9), get("h_z", 4.0));
    }
    if (name == "pxp") {
        reject_unknown({});
        return build_pxp(L);
    }
    throw std::invalid_argument("build_model: unknown model '" + name + "'");
}

}  // namespace trotter
