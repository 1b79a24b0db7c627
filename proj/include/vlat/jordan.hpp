#pragma once

#include <vector>

#include "vlat/lattice.hpp"

namespace vlat {

// A uni-valued component: the Gram of its basis is sigma_v * unimodular_gram.
struct JordanBlock {
    ValGroupElem scale_valuation;
    GramLattice unimodular_gram;
    // Columns: the block's basis in ambient coordinates.
    Matrix transition;
    // Sizes (1 or 2) of the orthogonal pieces making up the block, in basis order.
    std::vector<size_t> pieces;

    size_t rank() const { return unimodular_gram.rank(); }
    GramLattice gram() const;
};

struct JordanDecomposition {
    std::vector<JordanBlock> blocks;

    // All block bases side by side.
    Matrix transition() const;
    ValGroupElem last_valuation() const { return blocks.back().scale_valuation; }
};

struct Splitting {
    GramLattice sub, complement;
    // Columns in the coordinates of the input lattice.
    Matrix sub_basis, complement_basis;
};

// det A divides every Cramer numerator det A_{i,x}, where A is the Gram of idx.
bool can_split(const GramLattice& M, const std::vector<size_t>& idx);
Splitting split_off(const GramLattice& M, const std::vector<size_t>& idx);

JordanDecomposition jordan_decompose(const GramLattice& M);
JordanBlock diagonalize_component(const JordanBlock& B);
// Jordan decomposition with every block passed through diagonalize_component.
JordanDecomposition diagonal_decompose(const GramLattice& M);

}  // namespace vlat
