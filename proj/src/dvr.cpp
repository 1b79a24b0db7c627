#include "dvr.hpp"

#include <algorithm>

#include "vlat/errors.hpp"

namespace vlat::detail {

namespace {

mpz_class ppow(uint32_t p, int64_t e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
    return r;
}

void reduce(const DvrCtx& c, mpz_class& a, mpz_class& b, int64_t r) {
    if (r <= 0) {
        a = 0;
        b = 0;
        return;
    }
    if (!c.ramified) {
        mpz_class m = ppow(c.p, r);
        mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        b = 0;
        return;
    }
    mpz_fdiv_r_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>((r + 1) / 2));
    mpz_fdiv_r_2exp(b.get_mpz_t(), b.get_mpz_t(), static_cast<mp_bitcnt_t>(r / 2));
}

// Number of pi factors of a reduced (a, b), capped at r.
int64_t vpi(const DvrCtx& c, const mpz_class& a, const mpz_class& b, int64_t r) {
    if (!c.ramified) {
        if (a == 0) return r;
        mpz_class t;
        mpz_class p(c.p);
        int64_t k = static_cast<int64_t>(mpz_remove(t.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()));
        return std::min(k, r);
    }
    int64_t va = a == 0 ? kInf : 2 * static_cast<int64_t>(mpz_scan1(a.get_mpz_t(), 0));
    int64_t vb = b == 0 ? kInf : 2 * static_cast<int64_t>(mpz_scan1(b.get_mpz_t(), 0)) + 1;
    return std::min({va, vb, r});
}

void shift_down(const DvrCtx& c, mpz_class& a, mpz_class& b, int64_t k) {
    if (k <= 0) return;
    if (!c.ramified) {
        mpz_class m = ppow(c.p, k);
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        return;
    }
    if (k & 1) {
        mpz_class na = b;
        mpz_divexact_ui(b.get_mpz_t(), a.get_mpz_t(), 2);
        a = na;
        --k;
    }
    mpz_fdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(k / 2));
    mpz_fdiv_q_2exp(b.get_mpz_t(), b.get_mpz_t(), static_cast<mp_bitcnt_t>(k / 2));
}

void shift_up(const DvrCtx& c, mpz_class& a, mpz_class& b, int64_t k) {
    if (k <= 0) return;
    if (!c.ramified) {
        a *= ppow(c.p, k);
        return;
    }
    if (k & 1) {
        mpz_class na = 2 * b;
        b = a;
        a = na;
        --k;
    }
    mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(k / 2));
    mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), static_cast<mp_bitcnt_t>(k / 2));
}

DvrValue capped_zero(int64_t abs) {
    DvrValue z;
    z.known_zero = true;
    z.abs = abs;
    return z;
}

int64_t lower(const DvrValue& x) { return x.known_zero ? x.abs : x.val; }

}  // namespace

DvrValue dvr_exact_zero() { return DvrValue{}; }

DvrValue dvr_make(const DvrCtx& c, int64_t base, mpz_class a, mpz_class b, int64_t abs) {
    abs = std::min(abs, c.cap);
    int64_t r = abs - base;
    if (r <= 0) return capped_zero(abs);
    reduce(c, a, b, r);
    int64_t k = vpi(c, a, b, r);
    if (k >= r) return capped_zero(abs);
    shift_down(c, a, b, k);
    DvrValue x;
    x.known_zero = false;
    x.val = base + k;
    x.abs = abs;
    reduce(c, a, b, abs - x.val);
    x.a = std::move(a);
    x.b = std::move(b);
    return x;
}

DvrValue dvr_from_int(const DvrCtx& c, const mpz_class& n) {
    if (n == 0) return dvr_exact_zero();
    return dvr_make(c, 0, n, 0, c.cap);
}

DvrValue dvr_add(const DvrCtx& c, const DvrValue& x, const DvrValue& y) {
    if (x.known_zero && x.abs == kInf) return y;
    if (y.known_zero && y.abs == kInf) return x;
    int64_t abs = std::min(x.abs, y.abs);
    if (x.known_zero && y.known_zero) return capped_zero(abs);
    int64_t m = std::min(x.known_zero ? kInf : x.val, y.known_zero ? kInf : y.val);
    if (m >= abs) return capped_zero(abs);
    mpz_class sa, sb;
    if (!x.known_zero) {
        mpz_class a = x.a, b = x.b;
        shift_up(c, a, b, x.val - m);
        sa += a;
        sb += b;
    }
    if (!y.known_zero) {
        mpz_class a = y.a, b = y.b;
        shift_up(c, a, b, y.val - m);
        sa += a;
        sb += b;
    }
    return dvr_make(c, m, sa, sb, abs);
}

DvrValue dvr_neg(const DvrCtx& c, const DvrValue& x) {
    if (x.known_zero) return x;
    return dvr_make(c, x.val, -x.a, -x.b, x.abs);
}

DvrValue dvr_mul(const DvrCtx& c, const DvrValue& x, const DvrValue& y) {
    if ((x.known_zero && x.abs == kInf) || (y.known_zero && y.abs == kInf)) return dvr_exact_zero();
    int64_t abs = std::min({x.abs + lower(y), y.abs + lower(x), c.cap});
    if (x.known_zero || y.known_zero) return capped_zero(abs);
    mpz_class a, b;
    if (!c.ramified) {
        a = x.a * y.a;
    } else {
        a = x.a * y.a + 2 * x.b * y.b;
        b = x.a * y.b + x.b * y.a;
    }
    return dvr_make(c, x.val + y.val, a, b, abs);
}

DvrValue dvr_inv(const DvrCtx& c, const DvrValue& x) {
    if (x.known_zero) {
        if (x.abs == kInf) throw DomainError("division by zero");
        throw IndeterminateValuation("division by an element that is zero to precision " +
                                     std::to_string(x.abs));
    }
    int64_t r = x.abs - x.val;
    mpz_class a, b;
    if (!c.ramified) {
        mpz_class m = ppow(c.p, r);
        mpz_invert(a.get_mpz_t(), x.a.get_mpz_t(), m.get_mpz_t());
    } else {
        mpz_class m;
        mpz_setbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>((r + 1) / 2 + 1));
        mpz_class n = x.a * x.a - 2 * x.b * x.b;
        mpz_class ni;
        mpz_invert(ni.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
        a = x.a * ni;
        b = -x.b * ni;
    }
    return dvr_make(c, -x.val, a, b, -x.val + r);
}

DvrValue dvr_truncate(const DvrCtx& c, const DvrValue& x, int64_t abs) {
    if (abs >= x.abs) return x;
    if (x.known_zero) return capped_zero(abs);
    return dvr_make(c, x.val, x.a, x.b, abs);
}

uint32_t dvr_residue(const DvrCtx& c, const DvrValue& x) {
    if (x.known_zero) {
        if (x.abs < 1) throw IndeterminateValuation("residue undetermined at precision " + std::to_string(x.abs));
        return 0;
    }
    if (x.val < 0) throw DomainError("residue of an element outside the valuation ring");
    if (x.val > 0) return 0;
    if (c.ramified) return mpz_tstbit(x.a.get_mpz_t(), 0);
    return static_cast<uint32_t>(mpz_fdiv_ui(x.a.get_mpz_t(), c.p));
}

void dvr_digits(const DvrCtx& c, const DvrValue& x, mpz_class& a, mpz_class& b) {
    a = 0;
    b = 0;
    if (x.known_zero) return;
    if (x.val < 0) throw DomainError("element outside the valuation ring has no integer digits");
    a = x.a;
    b = x.b;
    shift_up(c, a, b, x.val);
    reduce(c, a, b, x.abs);
}

std::string dvr_to_string(const DvrCtx& c, const DvrValue& x) {
    const std::string pi = c.ramified ? "pi" : std::to_string(c.p);
    const std::string tail = x.abs < c.cap ? " + O(" + pi + "^" + std::to_string(x.abs) + ")" : "";
    if (x.known_zero) return x.abs == kInf ? "0" : "O(" + pi + "^" + std::to_string(x.abs) + ")";
    std::string body;
    if (x.val >= 0) {
        mpz_class a, b;
        dvr_digits(c, x, a, b);
        body = a.get_str();
        if (c.ramified && b != 0) body += "+" + b.get_str() + "*pi";
    } else {
        body = "(" + x.a.get_str();
        if (c.ramified && x.b != 0) body += "+" + x.b.get_str() + "*pi";
        body += ")/" + pi + "^" + std::to_string(-x.val);
    }
    return body + tail;
}

}  // namespace vlat::detail
