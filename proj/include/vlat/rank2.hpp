#pragma once

#include <optional>
#include <string>

#include "vlat/lattice.hpp"

namespace vlat {

// Unimodular rank 2 lattice M_{alpha,beta}: basis x, y with x^2 = alpha, (x,y) = 1,
// y^2 = beta, and v(alpha) <= v(beta).
struct Rank2Form {
    RingElem alpha;
    RingElem beta;
    // Columns x, y in the coordinates of the lattice the form was read from.
    Matrix basis;
    bool normalized = false;

    const RingConfig& ring() const { return alpha.ring(); }
    GramLattice lattice() const;
    std::string to_string() const;
};

Rank2Form make_rank2(const RingElem& alpha, const RingElem& beta);
Rank2Form normalize_rank2(const GramLattice& M);

struct MaximalNorm {
    // y_max = unit * (y + t x) has norm of maximal valuation.
    RingElem t;
    Rank2Form form;
    bool isotropic = false;
};

// Raises v(y^2) step by step until a certificate of maximality holds or the
// form turns out isotropic. IndeterminateValuation when precision runs out first.
MaximalNorm maximal_norm_search(const Rank2Form& F);

// Coordinates (in the x, y basis of F) of a primitive null vector, if any.
std::optional<Vec> isotropy_witness(const Rank2Form& F);

// Whether g is in (R*)^2 (alpha + 2R), or (R*)^2 (alpha + (4/beta) R_AS) when v(beta) = v(2).
bool norm_set_contains(const Rank2Form& F, const RingElem& g);

struct ArfInvariant {
    enum class Kind { vanishing, odd, even, exact };
    Kind kind = Kind::vanishing;
    ValGroupElem valuation;
    RingElem representative;
    // alpha*beta modulo S, when v(alpha*beta) > v(2) (or = v(2) with v(2) odd).
    std::optional<RingElem> fine_class;

    std::string to_string() const;
};

// F must carry a maximal beta; v(2) > 0.
ArfInvariant generalized_arf(const Rank2Form& F);
bool same_generalized_arf(const ArfInvariant& a, const ArfInvariant& b);
bool same_fine_arf(const ArfInvariant& a, const ArfInvariant& b);

struct MinimalNormClass {
    RingElem alpha;
    // Arf representative tau when v(beta) = v(2); then the class is modulo (R*)^2 (1 + (4/tau) R_AS).
    std::optional<RingElem> tau;
};

MinimalNormClass minimal_norm_class(const Rank2Form& F);
// Unit c realizing the equivalence of the two classes, if there is one.
std::optional<RingElem> same_minimal_norm_class(const MinimalNormClass& a, const MinimalNormClass& b);

// Whether the form lies in the regime where isomorphic_rank2 decides.
bool rank2_supported(const Rank2Form& maximal);

bool isomorphic_rank2(const Rank2Form& F, const Rank2Form& G);

}  // namespace vlat
