#pragma once

#include <initializer_list>
#include <string>

#include "vlat/matrix.hpp"

namespace vlat {

// Free lattice given by a symmetric Gram matrix.
class GramLattice {
public:
    GramLattice() = default;
    explicit GramLattice(Matrix gram);
    GramLattice(const RingConfig& ring, const std::vector<std::vector<long>>& rows);
    static GramLattice diagonal(const RingConfig& ring, const Vec& d);
    static GramLattice diagonal(const RingConfig& ring, const std::vector<long>& d);
    static GramLattice diagonal(const RingConfig& ring, std::initializer_list<long> d) {
        return diagonal(ring, std::vector<long>(d));
    }
    static GramLattice empty(const RingConfig& ring) { return GramLattice(Matrix(ring, 0, 0)); }

    const RingConfig& ring() const { return gram_.ring(); }
    const Matrix& gram() const { return gram_; }
    size_t rank() const { return gram_.rows(); }
    const RingElem& operator()(size_t i, size_t j) const { return gram_(i, j); }

    RingElem pair(const Vec& x, const Vec& y) const { return dot(x, gram_ * y); }
    RingElem norm(const Vec& x) const { return pair(x, x); }

    RingElem det() const { return determinant(gram_); }

    std::string to_string() const { return gram_.to_string(); }

private:
    Matrix gram_;
};

// min v(gram entry); IndeterminateValuation if every entry is zero to precision.
ValGroupElem lattice_valuation(const GramLattice& M);
bool is_unimodular(const GramLattice& M);
GramLattice rescale(const GramLattice& M, const RingElem& a);
GramLattice direct_sum(const GramLattice& M, const GramLattice& N);
// T^t G T; T must have unit determinant.
GramLattice change_basis(const GramLattice& M, const Matrix& T);
// Same without the unit-determinant check (sublattices, rational bases).
GramLattice transform_gram(const GramLattice& M, const Matrix& T);

bool is_unit_matrix(const Matrix& T);
Matrix block_diag(const Matrix& a, const Matrix& b);

}  // namespace vlat
