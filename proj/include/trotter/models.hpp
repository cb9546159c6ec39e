#pragma once

#include <map>
#include <optional>
#include <string>

#include "trotter/types.hpp"

namespace trotter {

/// Hermitian operator on 1..3 adjacent-or-not sites (ascending, 1-based).
struct LocalTerm {
    std::vector<int> sites;
    Mat matrix;
};

enum class Group { odd, even };

/// Model identity plus the analytically predicted ladder frequency.
struct ModelSpec {
    std::string name;
    std::map<std::string, double> params;
    double omega = 0.0;          // predicted ladder frequency, 0 if undefined
    std::string omega_validity;  // where the ladder prediction applies

    /// Stroboscopic time t_p = 2 pi p / omega (requires omega > 0).
    double strobe_time(int p) const;
};

/// Nearest-neighbor Hamiltonian split into two internally commuting groups.
/// The sum of all terms reproduces H exactly; single-site fields are absorbed
/// into bond terms (half per adjacent interior bond, full weight at chain
/// ends) so that exactly two groups suffice.
struct SplitHamiltonian {
    int L = 0;
    std::vector<LocalTerm> odd_terms;
    std::vector<LocalTerm> even_terms;
    ModelSpec model_spec;

    const std::vector<LocalTerm>& group(Group g) const {
        return g == Group::odd ? odd_terms : even_terms;
    }

    /// Dense 2^L x 2^L matrix of one group.
    Mat group_matrix(Group g) const;

    /// Dense assembled H = H_odd + H_even.
    Mat full_matrix() const;
};

/// Isotropic Heisenberg chain (unit coupling, S = sigma/2) with uniform
/// transverse field h_x, open boundaries. Ladder frequency omega = h_x.
SplitHamiltonian build_heisenberg(int L, double h_x);

/// XX chain with on-site fields and a linear Stark potential j*h_z*sigma^z
/// (bare Pauli operators). Ladder frequency omega = 2 h_z.
SplitHamiltonian build_stark(int L, double j_x, double h_x, double h_y, double h_z);

/// Projector-constrained X flips T_j = P_{j-1} sigma^x_j P_{j+1} for
/// j = 2..L-1, grouped by parity of j. Ladder frequency omega = 1.
SplitHamiltonian build_pxp(int L);

/// Build by name with parameter map; unknown names or parameters throw.
SplitHamiltonian build_model(const std::string& name, int L,
                             const std::map<std::string, double>& params);

}  // namespace trotter
