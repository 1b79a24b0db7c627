#pragma once

#include "gen.hpp"
#include "vlat/lattice.hpp"

namespace gen {

using vlat::GramLattice;
using vlat::Matrix;

inline Matrix random_unit_matrix(Gen& g, const RingConfig& R, size_t n) {
    Matrix L = Matrix::identity(R, n), U = Matrix::identity(R, n);
    for (size_t i = 0; i < n; ++i) {
        U(i, i) = g.unit(R);
        for (size_t j = 0; j < i; ++j) {
            L(i, j) = g.elem_or_zero(R, 2, 0.3);
            U(j, i) = g.elem_or_zero(R, 2, 0.3);
        }
    }
    Matrix T = L * U;
    // random row permutation
    for (size_t i = n; i > 1; --i) {
        size_t j = static_cast<size_t>(g.range(0, static_cast<int64_t>(i) - 1));
        for (size_t c = 0; c < n; ++c) std::swap(T(i - 1, c), T(j, c));
    }
    return T;
}

// Random symmetric Gram with nonzero determinant (rank n).
inline GramLattice random_lattice(Gen& g, const RingConfig& R, size_t n, int64_t maxv = 3) {
    for (;;) {
        Matrix m(R, n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j) {
                m(i, j) = g.elem_or_zero(R, maxv, 0.25);
                m(j, i) = m(i, j);
            }
        GramLattice M(m);
        RingElem d = M.det();
        if (!d.is_zero() && d.certified()) return M;
    }
}

// Random lattice built as a sum of rescaled pieces with a basis change applied.
inline GramLattice random_jordan_lattice(Gen& g, const RingConfig& R, size_t n, int64_t maxv = 3) {
    Matrix m(R, n, n);
    size_t i = 0;
    while (i < n) {
        RingElem s = RingElem::sigma(R, g.value(R, maxv));
        if (i + 1 < n && g.coin(0.4)) {
            m(i, i) = s * g.elem_or_zero(R, 2, 0.3) * RingElem::sigma(R, R.discrete() ? vlat::ValGroupElem::of(1) : vlat::ValGroupElem::of(0, 1));
            m(i + 1, i + 1) = s * g.elem_or_zero(R, 2, 0.3) * RingElem::sigma(R, R.discrete() ? vlat::ValGroupElem::of(1) : vlat::ValGroupElem::of(0, 1));
            m(i, i + 1) = s * g.unit(R);
            m(i + 1, i) = m(i, i + 1);
            i += 2;
        } else {
            m(i, i) = s * g.unit(R);
            i += 1;
        }
    }
    return vlat::change_basis(GramLattice(m), random_unit_matrix(g, R, n));
}

}  // namespace gen
