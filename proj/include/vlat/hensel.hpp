#pragma once

#include <vector>

#include "vlat/ring.hpp"

namespace vlat {

// z with (1+z)^2 = 1+y and v(z) = v(y) - v(2). Needs v(y) > 2v(2).
RingElem sqrt_one_plus(const RingElem& y);

// Root of A t^2 + B t + C = 0 when v(AC) > 2v(B). By default the root with
// v(t) = v(C/B); large_root picks the other one, of valuation v(B/A).
RingElem solve_quadratic(const RingElem& A, const RingElem& B, const RingElem& C, bool large_root = false);

// x with x^2 - x = y and residue(x) = residue_hint. Residue characteristic 2.
RingElem artin_schreier_solve(const RingElem& y, uint32_t residue_hint = 0);
// y in R with residue(y) in the Artin-Schreier image of the residue field.
bool in_artin_schreier_image(const RingElem& y);

bool is_residual_square(const RingElem& a);
bool is_approximate_square(const RingElem& a);
// b with a = b^2 (1 + m), v(m) > 0, when a is an approximate square.
RingElem approximate_sqrt(const RingElem& a);

// d = 2t + t^2 for some t with 2v(t) > v(2).
bool in_S(const RingElem& d);

// All sums sum_{lo <= i < hi} d_i pi^i with digits in {0..p-1}. Discrete rings only.
std::vector<RingElem> digit_expansions(const RingConfig& ring, int64_t lo, int64_t hi);

}  // namespace vlat
