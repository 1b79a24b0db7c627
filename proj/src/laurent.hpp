#pragma once

#include <string>

#include "vlat/detail/reps.hpp"
#include "vlat/value_group.hpp"

namespace vlat::detail {

// F_q((u))((t)) with t-degrees capped at nt and u-series capped at u^(nu+1).
// Coefficients stay exact rational functions in u until an operation needs a
// series (Hensel iterations); t-series become inexact on non-monomial inverses.
struct LaurentCtx {
    uint32_t q = 3;
    int64_t nt = 6;
    int64_t nu = 16;
};

LaurentValue lv_exact_zero();
LaurentValue lv_monomial(const LaurentCtx& c, uint32_t digit, int64_t i, int64_t j);
LaurentValue lv_from_coeffs(const LaurentCtx& c, int64_t tlow, std::vector<UCoef> coeffs, int64_t tcap);
UCoef uc_exact(const LaurentCtx& c, int64_t e, Poly num, Poly den);

LaurentValue lv_add(const LaurentCtx& c, const LaurentValue& x, const LaurentValue& y);
LaurentValue lv_neg(const LaurentCtx& c, const LaurentValue& x);
LaurentValue lv_mul(const LaurentCtx& c, const LaurentValue& x, const LaurentValue& y);
LaurentValue lv_inv(const LaurentCtx& c, const LaurentValue& x);
// x as a u-series with absolute cap.
UCoef uc_to_series_public(const LaurentCtx& c, const UCoef& x, int64_t cap);
// Every nonzero coefficient expanded as a u-series capped at u^(nu+1).
LaurentValue lv_to_series(const LaurentCtx& c, const LaurentValue& x);
LaurentValue lv_truncate(const LaurentCtx& c, const LaurentValue& x, const ValGroupElem& g);

bool lv_is_exact_zero(const LaurentValue& x);
bool lv_is_known_zero(const LaurentValue& x);
// Valuation of the leading known term; top when the known part is zero.
ValGroupElem lv_leading(const LaurentValue& x);
ValGroupElem lv_known_to(const LaurentValue& x);
uint32_t lv_residue(const LaurentCtx& c, const LaurentValue& x);
// Digits of the t^0 coefficient modulo u^k; requires v(x) >= 0.
std::vector<uint32_t> lv_low_digits(const LaurentCtx& c, const LaurentValue& x, int64_t k);
// Expansion of one coefficient as (exponent, digit) pairs below the given cap.
std::vector<std::pair<int64_t, uint32_t>> uc_terms(const LaurentCtx& c, const UCoef& x, int64_t cap);
std::string lv_to_string(const LaurentCtx& c, const LaurentValue& x);

}  // namespace vlat::detail
