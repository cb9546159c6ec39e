#pragma once

#include "trotter/types.hpp"

namespace trotter::kernels {

/// Apply a dense 2^k x 2^k matrix acting on `sites` (ascending, 1-based,
/// k <= 3) to the amplitude vector in place, identity on all other sites.
/// The matrix need not be unitary. This is the hot loop of Trotterized
/// propagation: the outer loop over the 2^(L-k) untouched-bit configurations
/// is OpenMP-parallel for large state vectors.
void apply_local(Vec& amps, int L, const std::vector<int>& sites, const Mat& gate);

/// Plain serial reference for apply_local. Same contract, written as a
/// direct sum over matrix elements; kept for correctness tests and as the
/// baseline of the kernel benchmark.
namespace serial {
void apply_local(Vec& amps, int L, const std::vector<int>& sites, const Mat& gate);
}

}  // namespace trotter::kernels
