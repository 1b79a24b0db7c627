#include "vlat/jordan.hpp"

#include <numeric>

#include "vlat/errors.hpp"

namespace vlat {

GramLattice JordanBlock::gram() const {
    return rescale(unimodular_gram, RingElem::sigma(unimodular_gram.ring(), scale_valuation));
}

Matrix JordanDecomposition::transition() const {
    if (blocks.empty()) throw DomainError("empty decomposition");
    std::vector<Vec> cols;
    for (const auto& b : blocks)
        for (size_t j = 0; j < b.transition.cols(); ++j) cols.push_back(b.transition.col(j));
    return Matrix::from_cols(blocks[0].transition.ring(), blocks[0].transition.rows(), cols);
}

namespace {

std::vector<size_t> others(size_t n, const std::vector<size_t>& idx) {
    std::vector<size_t> out;
    for (size_t k = 0; k < n; ++k)
        if (std::find(idx.begin(), idx.end(), k) == idx.end()) out.push_back(k);
    return out;
}

// Cramer coefficients of the projection of e_k onto span(idx).
Vec cramer(const GramLattice& M, const std::vector<size_t>& idx, size_t k, const RingElem& detA) {
    Matrix A = M.gram().submatrix(idx, idx);
    Vec a;
    for (size_t i = 0; i < idx.size(); ++i) {
        Matrix Ai = A;
        for (size_t r = 0; r < idx.size(); ++r) Ai(r, i) = M(idx[r], k);
        a.push_back(determinant(Ai) / detA);
    }
    return a;
}

RingElem checked_det(const GramLattice& M, const std::vector<size_t>& idx) {
    RingElem d = determinant(M.gram().submatrix(idx, idx));
    if (d.is_exact_zero()) throw DomainError("selected sublattice is degenerate");
    (void)d.valuation();  // throws when undetermined
    return d;
}

}  // namespace

bool can_split(const GramLattice& M, const std::vector<size_t>& idx) {
    RingElem detA = checked_det(M, idx);
    ValGroupElem v = detA.valuation();
    Matrix A = M.gram().submatrix(idx, idx);
    for (size_t k : others(M.rank(), idx))
        for (size_t i = 0; i < idx.size(); ++i) {
            Matrix Ai = A;
            for (size_t r = 0; r < idx.size(); ++r) Ai(r, i) = M(idx[r], k);
            if (!determinant(Ai).val_ge(v)) return false;
        }
    return true;
}

Splitting split_off(const GramLattice& M, const std::vector<size_t>& idx) {
    if (!can_split(M, idx)) throw SplitError("sublattice is not an orthogonal summand");
    const RingConfig& R = M.ring();
    size_t n = M.rank();
    RingElem detA = checked_det(M, idx);
    Splitting s;
    s.sub_basis = Matrix(R, n, idx.size());
    for (size_t i = 0; i < idx.size(); ++i) s.sub_basis(idx[i], i) = RingElem::one(R);
    auto rest = others(n, idx);
    s.complement_basis = Matrix(R, n, rest.size());
    for (size_t c = 0; c < rest.size(); ++c) {
        Vec a = cramer(M, idx, rest[c], detA);
        s.complement_basis(rest[c], c) = RingElem::one(R);
        for (size_t i = 0; i < idx.size(); ++i) s.complement_basis(idx[i], c) = -a[i];
    }
    s.sub = transform_gram(M, s.sub_basis);
    s.complement = transform_gram(M, s.complement_basis);
    return s;
}

namespace {

struct Piece {
    ValGroupElem v;
    Matrix basis;  // columns in ambient coordinates
};

// Index set of a minimal-valuation entry: a diagonal entry when one attains the
// minimum (lowest index), otherwise the lowest off-diagonal pair.
std::vector<size_t> choose_pivot(const GramLattice& M, ValGroupElem& v) {
    size_t n = M.rank();
    bool any = false;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            if (M(i, j).is_zero()) continue;
            ValGroupElem w = M(i, j).valuation();
            if (!any || w < v) v = w;
            any = true;
        }
    if (!any) throw IndeterminateValuation("remaining Gram block is zero to precision");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            if (M(i, j).is_zero() && !M(i, j).is_exact_zero() && M(i, j).lower_bound() <= v)
                throw IndeterminateValuation("cannot rule out a smaller entry at precision " +
                                             M(i, j).known_to().to_string());
    for (size_t i = 0; i < n; ++i)
        if (!M(i, i).is_zero() && M(i, i).valuation() == v) return {i};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (!M(i, j).is_zero() && M(i, j).valuation() == v) return {i, j};
    throw DomainError("unreachable pivot search");
}

JordanBlock finish_block(const GramLattice& ambient, JordanBlock b) {
    const RingConfig& R = ambient.ring();
    const ValGroupElem& v = b.scale_valuation;
    Matrix g = transform_gram(ambient, b.transition).gram();
    RingElem inv = RingElem::sigma(R, v).inverse();
    b.unimodular_gram = GramLattice(g.scaled(inv));
    const GramLattice& U = b.unimodular_gram;
    ValGroupElem zero = R.zero_value();
    for (size_t i = 0; i < U.rank(); ++i)
        for (size_t j = i; j < U.rank(); ++j)
            if (!U(i, j).is_exact_zero() && U(i, j).known_to() <= zero)
                throw IndeterminateValuation("block at " + v.to_string() + " only known to " +
                                             U(i, j).known_to().to_string() + " after rescaling");
    return b;
}

JordanBlock make_block(const GramLattice& ambient, const ValGroupElem& v, const std::vector<Piece>& ps) {
    std::vector<Vec> cols;
    JordanBlock b;
    b.scale_valuation = v;
    for (const auto& p : ps) {
        for (size_t j = 0; j < p.basis.cols(); ++j) cols.push_back(p.basis.col(j));
        b.pieces.push_back(p.basis.cols());
    }
    b.transition = Matrix::from_cols(ambient.ring(), ambient.rank(), cols);
    return finish_block(ambient, std::move(b));
}

Matrix moved(const Matrix& A, const RingConfig& R) {
    Matrix B(R, A.rows(), A.cols());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) B(i, j) = A(i, j).with_ring(R);
    return B;
}

bool exact_input(const GramLattice& M) {
    for (size_t i = 0; i < M.rank(); ++i)
        for (size_t j = i; j < M.rank(); ++j)
            if (!M(i, j).known_to().is_top()) return false;
    return true;
}

// Greedy splitting into rank-1 / rank-2 pieces of nondecreasing valuation.
std::vector<Piece> split_pieces(const GramLattice& M) {
    const RingConfig& R = M.ring();
    std::vector<Piece> out;
    GramLattice cur = M;
    Matrix basis = Matrix::identity(R, M.rank());
    while (cur.rank() > 0) {
        ValGroupElem v;
        auto idx = choose_pivot(cur, v);
        Splitting s = split_off(cur, idx);
        out.push_back(Piece{v, basis * s.sub_basis});
        basis = basis * s.complement_basis;
        cur = s.complement;
    }
    return out;
}

JordanDecomposition decompose_at_cap(const GramLattice& M) {
    auto pieces = split_pieces(M);
    JordanDecomposition d;
    size_t start = 0;
    for (size_t k = 1; k <= pieces.size(); ++k) {
        if (k < pieces.size() && pieces[k].v == pieces[start].v) continue;
        std::vector<Piece> group(pieces.begin() + static_cast<std::ptrdiff_t>(start),
                                 pieces.begin() + static_cast<std::ptrdiff_t>(k));
        d.blocks.push_back(make_block(M, pieces[start].v, group));
        start = k;
    }
    return d;
}

}  // namespace

JordanDecomposition jordan_decompose(const GramLattice& M) {
    if (M.rank() == 0) return {};
    const RingConfig& R = M.ring();
    try {
        return decompose_at_cap(M);
    } catch (const IndeterminateValuation&) {
        // Non-monomial pivots cost t-precision; exact input can be split at a
        // higher t cap and the blocks brought back.
        if (R.discrete() || !exact_input(M)) throw;
    }
    RingConfig W = R.with_precision(ValGroupElem::of(3 * R.precision[0], R.precision[1]));
    JordanDecomposition wide = decompose_at_cap(GramLattice(moved(M.gram(), W)));
    JordanDecomposition d;
    for (auto& b : wide.blocks) {
        b.transition = moved(b.transition, R);
        d.blocks.push_back(finish_block(M, std::move(b)));
    }
    return d;
}

namespace {

// Orthogonal basis of x, y (rank-2 piece, (x,y) a unit) and z (unit norm),
// in the coordinates of U.
std::vector<Vec> merge_three(const GramLattice& U, const Vec& x, const Vec& y, const Vec& z) {
    RingElem xx = U.norm(x), yy = U.norm(y), zz = U.norm(z), xy = U.pair(x, y);
    auto comb = [&](const RingElem& a, const Vec& p, const RingElem& b, const Vec& q, const RingElem& c,
                    const Vec& r) {
        Vec out;
        for (size_t i = 0; i < p.size(); ++i) out.push_back(a * p[i] + b * q[i] + c * r[i]);
        return out;
    };
    RingElem one = RingElem::one(U.ring()), zero = RingElem::zero(U.ring());
    Vec a = comb(one, x, zero, y, one, z);
    Vec b = comb(zero, x, zz, y, -xy, z);
    Vec c = comb(yy * zz + xy.square(), x, -(xy * (xx + zz)), y, -(xx * yy - xy.square()), z);
    return {a, b, c};
}

struct LocalPiece {
    std::vector<Vec> vecs;  // in coordinates of the unimodular Gram
};

}  // namespace

JordanBlock diagonalize_component(const JordanBlock& B) {
    const GramLattice& U = B.unimodular_gram;
    const RingConfig& R = U.ring();
    size_t r = U.rank();
    bool odd = R.v2().is_zero();
    RingElem one = RingElem::one(R);

    // Split into unit-norm lines and rank-2 planes with unit pairing.
    std::vector<LocalPiece> lines, planes;
    GramLattice cur = U;
    Matrix basis = Matrix::identity(R, r);
    while (cur.rank() > 0) {
        size_t n = cur.rank();
        std::vector<size_t> idx;
        for (size_t i = 0; i < n && idx.empty(); ++i)
            if (cur(i, i).is_unit()) idx = {i};
        if (idx.empty()) {
            size_t pi = n, pj = n;
            for (size_t i = 0; i < n && pi == n; ++i)
                for (size_t j = i + 1; j < n; ++j)
                    if (cur(i, j).is_unit()) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi == n) throw DomainError("component is not unimodular");
            if (odd) {
                // (x+y)^2 = x^2 + y^2 + 2(x,y) is a unit when 2 is.
                Matrix T = Matrix::identity(R, n);
                T(pj, pi) = one;
                basis = basis * T;
                cur = transform_gram(cur, T);
                idx = {pi};
            } else {
                idx = {pi, pj};
            }
        }
        Splitting s = split_off(cur, idx);
        Matrix sub = basis * s.sub_basis;
        LocalPiece p;
        for (size_t j = 0; j < sub.cols(); ++j) p.vecs.push_back(sub.col(j));
        (idx.size() == 1 ? lines : planes).push_back(p);
        basis = basis * s.complement_basis;
        cur = s.complement;
    }

    // Each plane meeting a line of the same valuation becomes three lines.
    while (!planes.empty() && !lines.empty()) {
        LocalPiece pl = planes.back();
        planes.pop_back();
        LocalPiece ln = lines.back();
        lines.pop_back();
        for (auto& v : merge_three(U, pl.vecs[0], pl.vecs[1], ln.vecs[0])) lines.push_back(LocalPiece{{v}});
    }

    std::vector<Vec> cols;
    JordanBlock out;
    out.scale_valuation = B.scale_valuation;
    for (const auto& p : lines) {
        cols.push_back(p.vecs[0]);
        out.pieces.push_back(1);
    }
    for (const auto& p : planes) {
        cols.push_back(p.vecs[0]);
        cols.push_back(p.vecs[1]);
        out.pieces.push_back(2);
    }
    Matrix T = Matrix::from_cols(R, r, cols);
    if (!is_unit_matrix(T)) throw DomainError("diagonalization produced a non-invertible basis change");
    out.unimodular_gram = transform_gram(U, T);
    out.transition = B.transition * T;
    return out;
}

JordanDecomposition diagonal_decompose(const GramLattice& M) {
    JordanDecomposition d = jordan_decompose(M);
    for (auto& b : d.blocks) b = diagonalize_component(b);
    return d;
}

}  // namespace vlat
