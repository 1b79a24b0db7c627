#include "vlat/lattice.hpp"

#include "vlat/errors.hpp"

namespace vlat {

GramLattice::GramLattice(Matrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols()) throw DomainError("Gram matrix must be square");
    if (!gram_.is_symmetric()) throw DomainError("Gram matrix must be symmetric");
}

GramLattice::GramLattice(const RingConfig& ring, const std::vector<std::vector<long>>& rows)
    : GramLattice(Matrix::from_rows(ring, rows)) {}

GramLattice GramLattice::diagonal(const RingConfig& ring, const Vec& d) { return GramLattice(Matrix::diagonal(ring, d)); }

GramLattice GramLattice::diagonal(const RingConfig& ring, const std::vector<long>& d) {
    Vec v;
    for (long x : d) v.push_back(x == 0 ? RingElem::zero(ring) : RingElem(ring, x));
    return diagonal(ring, v);
}

ValGroupElem lattice_valuation(const GramLattice& M) {
    bool any = false;
    ValGroupElem best = M.ring().top_value();
    for (size_t i = 0; i < M.rank(); ++i)
        for (size_t j = 0; j < M.rank(); ++j) {
            const RingElem& x = M(i, j);
            if (x.is_zero()) continue;
            any = true;
            best = std::min(best, x.valuation());
        }
    if (M.rank() == 0) return best;
    if (!any) throw IndeterminateValuation("every Gram entry is zero to precision");
    // A capped-zero entry could still hide a smaller valuation.
    for (size_t i = 0; i < M.rank(); ++i)
        for (size_t j = 0; j < M.rank(); ++j)
            if (M(i, j).is_zero() && !M(i, j).is_exact_zero() && M(i, j).lower_bound() <= best)
                throw IndeterminateValuation("a Gram entry is zero only to precision " +
                                             M(i, j).known_to().to_string());
    return best;
}

bool is_unimodular(const GramLattice& M) {
    if (M.rank() == 0) return true;
    RingElem d = M.det();
    if (d.is_zero() && !d.is_exact_zero() && d.lower_bound() > M.ring().zero_value()) return false;
    return d.valuation().is_zero();
}

GramLattice rescale(const GramLattice& M, const RingElem& a) {
    if (a.is_exact_zero()) throw DomainError("rescale by zero");
    return GramLattice(M.gram().scaled(a));
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    const RingConfig& R = a.rows() ? a.ring() : b.ring();
    if (a.rows() && b.rows() && !(a.ring() == b.ring())) throw ConfigError("direct sum over different rings");
    Matrix m(R, a.rows() + b.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

GramLattice direct_sum(const GramLattice& M, const GramLattice& N) {
    if (!(M.ring() == N.ring())) throw ConfigError("direct sum over different rings");
    return GramLattice(block_diag(M.gram(), N.gram()));
}

bool is_unit_matrix(const Matrix& T) {
    if (T.rows() != T.cols()) return false;
    if (T.rows() == 0) return true;
    RingElem d = determinant(T);
    if (d.is_zero()) return false;
    return d.valuation().is_zero() && T.entries_val_ge(T.ring().zero_value());
}

GramLattice transform_gram(const GramLattice& M, const Matrix& T) {
    Matrix g = T.transpose() * M.gram() * T;
    // Symmetrize exactly: the two triangles agree to precision already.
    for (size_t i = 0; i < g.rows(); ++i)
        for (size_t j = i + 1; j < g.cols(); ++j) g(j, i) = g(i, j);
    return GramLattice(g);
}

GramLattice change_basis(const GramLattice& M, const Matrix& T) {
    if (T.rows() != M.rank()) throw DomainError("basis change has the wrong size");
    if (!is_unit_matrix(T)) throw DomainError("basis change is not invertible over R");
    return transform_gram(M, T);
}

}  // namespace vlat
