#pragma once

#include <string>

#include "vlat/detail/reps.hpp"

namespace vlat::detail {

// Arithmetic on pi-adic numbers for the discrete backends. For padic/two_adic
// pi = p; for ramified2 pi^2 = 2 and p = 2.
struct DvrCtx {
    bool ramified = false;
    uint32_t p = 3;
    int64_t cap = 24;
};

DvrValue dvr_exact_zero();
// pi^base * (a + b pi) + O(pi^abs), normalized.
DvrValue dvr_make(const DvrCtx& c, int64_t base, mpz_class a, mpz_class b, int64_t abs);
DvrValue dvr_from_int(const DvrCtx& c, const mpz_class& n);

DvrValue dvr_add(const DvrCtx& c, const DvrValue& x, const DvrValue& y);
DvrValue dvr_neg(const DvrCtx& c, const DvrValue& x);
DvrValue dvr_mul(const DvrCtx& c, const DvrValue& x, const DvrValue& y);
DvrValue dvr_inv(const DvrCtx& c, const DvrValue& x);
DvrValue dvr_truncate(const DvrCtx& c, const DvrValue& x, int64_t abs);

uint32_t dvr_residue(const DvrCtx& c, const DvrValue& x);
// Integer pair (a, b) with x = a + b*pi modulo pi^abs; requires v(x) >= 0.
void dvr_digits(const DvrCtx& c, const DvrValue& x, mpz_class& a, mpz_class& b);
std::string dvr_to_string(const DvrCtx& c, const DvrValue& x);

}  // namespace vlat::detail
