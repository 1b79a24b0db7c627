#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vlat/jordan.hpp"

namespace vlat {

struct PresentedBlock {
    ValGroupElem scale_valuation;
    size_t offset = 0;
    // Sizes (1 or 2) of the orthogonal pieces, in basis order.
    std::vector<size_t> pieces;

    size_t rank() const;
    bool orthogonal() const;
};

// A Jordan decomposition together with the chosen bases of its pieces.
struct Presentation {
    GramLattice source;
    // Columns in source coordinates; gram = basis^t G basis, block diagonal.
    Matrix basis;
    GramLattice gram;
    std::vector<PresentedBlock> blocks;

    // sigma^{-1} times the Gram of block k.
    GramLattice unimodular(size_t k) const;
    std::string to_string() const;
};

Presentation present(const GramLattice& M);

struct BlockInvariants {
    ValGroupElem scale_valuation;
    size_t rank = 0;
    bool diagonalizable = false;
    // Top for a lattice with a single block.
    ValGroupElem gap;
    // Norm classes are taken modulo sigma * pi^norm_level, norm_level = min(gap, 2v(2) + 1).
    int64_t norm_level = 0;
    // x^2 / sigma for block vectors x with v(x^2) < v + norm_level, as residues mod pi^norm_level.
    // Discrete backends only.
    std::optional<std::vector<RingElem>> small_norms;

    bool operator==(const BlockInvariants& o) const;
};

using JordanInvariants = std::vector<BlockInvariants>;

JordanInvariants jordan_invariants(const GramLattice& M);

enum class CanonicalOrder { more_canonical, less_canonical, equal, incomparable };

std::string to_string(CanonicalOrder o);

// Whether A is more canonical than B. Both must present the same lattice.
CanonicalOrder canonical_compare(const Presentation& A, const Presentation& B);

struct Rep1Result {
    RingElem u, w;
    // Columns: the new orthogonal pair in the old (x, y) coordinates.
    Matrix basis;
    // det(basis) = (1 + (1+r)(1+s)t^2) / (1+t)^2, so (1+u)(1+w) = (1+r)(1+s) det^2.
    RingElem det;
};

// Orthogonal x, y with x^2 = 1+r, y^2 = 1+s go to (x + (1+r)t y)/(1+t), (y - (1+s)t x)/(1+t),
// of norms 1+u and 1+w.
Rep1Result rep1_transform(const RingElem& r, const RingElem& s, const RingElem& t);
// The t making w vanish, when v(r) + v(s) > 2v(2) and that t is a non-unit.
std::optional<RingElem> rep1_optimal_t(const RingElem& r, const RingElem& s);

struct MixResult {
    GramLattice N, K;
    // Columns z_1..z_n, w_1..w_m in the coordinates of M + L.
    Matrix basis;
};

// z_k = x_k + t (x_k, x_i) y_j and w_l = y_l - t (y_l, y_j) x_i.
// Needs M unimodular, v(L) > 0, and t^2 ab in r + I_{v(r)} where det M = 1 + r.
MixResult mix_transform(const GramLattice& M, const GramLattice& L, size_t i, size_t j, const RingElem& t);

struct CanonicalStep {
    std::string transform;
    Presentation after;
};

struct CanonicalForm {
    Presentation result;
    std::vector<CanonicalStep> transcript;
};

// Greedy rewriting: lowest block first, the best strictly improving step each round.
CanonicalForm canonicalize(const GramLattice& M);

}  // namespace vlat
