#pragma once

#include <vector>

#include "vlat/lattice.hpp"

namespace vlat {

// Form-preserving involution r of M (as a matrix in M's coordinates) with r x = y.
// Needs 2 invertible, x^2 = y^2 and v(x^2) minimal among norms of M.
Matrix reflection_taking(const GramLattice& M, const Vec& x, const Vec& y);

// Reflections r_1, ..., r_m (m <= rank) with r_1 r_2 ... r_m = f, for an isometry f of M.
std::vector<Matrix> decompose_automorphism(const GramLattice& M, const Matrix& f);

// phi^t G_M phi = G_N modulo I_{v(N_t) + 2v(2)}, where N_t is the last Jordan
// block of N. Returns psi with psi^t G_M psi = G_N and psi = phi mod I_{v(2)}.
// Columns of phi and psi are N's basis written in M's coordinates.
Matrix lift_isometry(const GramLattice& M, const GramLattice& N, const Matrix& phi);

}  // namespace vlat
