#include "laurent.hpp"

#include <algorithm>
#include <sstream>

#include "vlat/errors.hpp"

namespace vlat::detail {

namespace {

bool is_inf(int64_t v) { return v >= kInf / 2; }
int64_t norm_inf(int64_t v) { return is_inf(v) ? kInf : v; }

struct Fq {
    uint32_t q;
    uint32_t add(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= q ? s - q : s; }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + q - b; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : q - a; }
    uint32_t mul(uint32_t a, uint32_t b) const { return static_cast<uint32_t>(uint64_t(a) * b % q); }
    uint32_t inv(uint32_t a) const {
        if (a == 0) throw DomainError("inverse of zero in the residue field");
        uint64_t r = 1, b = a, e = q - 2;
        while (e) {
            if (e & 1) r = r * b % q;
            b = b * b % q;
            e >>= 1;
        }
        return static_cast<uint32_t>(r);
    }
};

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly padd(const Fq& f, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
    trim(r);
    return r;
}

Poly pmul(const Fq& f, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

Poly pscale(const Fq& f, const Poly& a, uint32_t s) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], s);
    trim(r);
    return r;
}

Poly pshift_up(const Poly& a, int64_t k) {
    if (a.empty() || k <= 0) return a;
    Poly r(static_cast<size_t>(k), 0);
    r.insert(r.end(), a.begin(), a.end());
    return r;
}

// a = q*b + r
void pdivmod(const Fq& f, Poly a, const Poly& b, Poly& quo, Poly& rem) {
    if (b.empty()) throw DomainError("polynomial division by zero");
    quo.clear();
    if (a.size() < b.size()) {
        rem = a;
        return;
    }
    quo.assign(a.size() - b.size() + 1, 0);
    uint32_t lead_inv = f.inv(b.back());
    for (size_t i = a.size(); i-- >= b.size();) {
        uint32_t coef = f.mul(a[i], lead_inv);
        size_t shift = i - (b.size() - 1);
        quo[shift] = coef;
        if (coef == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] = f.sub(a[shift + j], f.mul(coef, b[j]));
    }
    trim(a);
    trim(quo);
    rem = a;
}

Poly pgcd(const Fq& f, Poly a, Poly b) {
    while (!b.empty()) {
        Poly qq, r;
        pdivmod(f, a, b, qq, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) a = pscale(f, a, f.inv(a.back()));
    return a;
}

int64_t pval(const Poly& a) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) return static_cast<int64_t>(i);
    return kInf;
}

UCoef uc_zero() { return UCoef{}; }

bool uc_exact_zero(const UCoef& x) { return x.exact && x.num.empty(); }
bool uc_known_zero(const UCoef& x) { return x.num.empty(); }
int64_t uc_cap(const UCoef& x) { return x.exact ? kInf : x.cap; }
int64_t uc_lb(const UCoef& x) {
    if (x.num.empty()) return x.exact ? kInf : x.cap;
    return x.e;
}

UCoef uc_series(const LaurentCtx& c, int64_t e, Poly digits, int64_t cap) {
    cap = std::min(cap, c.nu + 1);
    UCoef r;
    r.exact = false;
    r.cap = cap;
    if (cap - e < static_cast<int64_t>(digits.size()))
        digits.resize(static_cast<size_t>(std::max<int64_t>(0, cap - e)));
    trim(digits);
    int64_t k = pval(digits);
    if (is_inf(k)) {
        r.e = cap;
        return r;
    }
    digits.erase(digits.begin(), digits.begin() + k);
    r.e = e + k;
    r.num = std::move(digits);
    r.den = {1};
    return r;
}

// Expansion of x as a series with absolute cap (x nonzero or series).
UCoef uc_to_series(const LaurentCtx& c0, const UCoef& x, int64_t cap) {
    Fq f{c0.q};
    LaurentCtx c = c0;
    c.nu = std::max(c0.nu, cap);
    if (!x.exact) {
        if (cap >= x.cap) return x;
        return uc_series(c, x.e, x.num, cap);
    }
    if (x.num.empty()) return uc_series(c, cap, {}, cap);
    int64_t n = cap - x.e;
    if (n <= 0) return uc_series(c, cap, {}, cap);
    Poly s(static_cast<size_t>(n), 0);
    for (int64_t k = 0; k < n; ++k) {
        uint32_t v = k < static_cast<int64_t>(x.num.size()) ? x.num[k] : 0;
        for (int64_t j = 1; j <= k && j < static_cast<int64_t>(x.den.size()); ++j)
            v = f.sub(v, f.mul(x.den[j], s[k - j]));
        s[k] = v;
    }
    return uc_series(c, x.e, s, cap);
}

UCoef uc_add(const LaurentCtx& c, const UCoef& x, const UCoef& y) {
    Fq f{c.q};
    if (uc_exact_zero(x)) return y;
    if (uc_exact_zero(y)) return x;
    if (x.exact && y.exact) {
        int64_t m = std::min(x.e, y.e);
        Poly a = pmul(f, pshift_up(x.num, x.e - m), y.den);
        Poly b = pmul(f, pshift_up(y.num, y.e - m), x.den);
        return uc_exact(c, m, padd(f, a, b), pmul(f, x.den, y.den));
    }
    int64_t cap = std::min({uc_cap(x), uc_cap(y), c.nu + 1});
    UCoef xs = uc_to_series(c, x, cap);
    UCoef ys = uc_to_series(c, y, cap);
    int64_t m = std::min(xs.num.empty() ? kInf : xs.e, ys.num.empty() ? kInf : ys.e);
    if (is_inf(m) || m >= cap) return uc_series(c, cap, {}, cap);
    Poly d(static_cast<size_t>(cap - m), 0);
    for (const UCoef* z : {&xs, &ys}) {
        for (size_t i = 0; i < z->num.size(); ++i) {
            int64_t k = z->e - m + static_cast<int64_t>(i);
            if (k < static_cast<int64_t>(d.size())) d[k] = f.add(d[k], z->num[i]);
        }
    }
    return uc_series(c, m, d, cap);
}

UCoef uc_neg(const LaurentCtx& c, const UCoef& x) {
    Fq f{c.q};
    UCoef r = x;
    for (auto& d : r.num) d = f.neg(d);
    return r;
}

UCoef uc_mul(const LaurentCtx& c, const UCoef& x, const UCoef& y) {
    Fq f{c.q};
    if (uc_exact_zero(x) || uc_exact_zero(y)) return uc_zero();
    if (x.exact && y.exact) return uc_exact(c, x.e + y.e, pmul(f, x.num, y.num), pmul(f, x.den, y.den));
    int64_t lbx = uc_lb(x), lby = uc_lb(y);
    int64_t cap = std::min({norm_inf(uc_cap(x) + lby), norm_inf(uc_cap(y) + lbx), c.nu + 1});
    UCoef xs = x.exact ? uc_to_series(c, x, cap - lby) : x;
    UCoef ys = y.exact ? uc_to_series(c, y, cap - lbx) : y;
    if (xs.num.empty() || ys.num.empty()) return uc_series(c, cap, {}, cap);
    int64_t e = xs.e + ys.e;
    int64_t n = cap - e;
    if (n <= 0) return uc_series(c, cap, {}, cap);
    Poly d(static_cast<size_t>(n), 0);
    for (size_t i = 0; i < xs.num.size() && static_cast<int64_t>(i) < n; ++i) {
        if (xs.num[i] == 0) continue;
        for (size_t j = 0; j < ys.num.size() && static_cast<int64_t>(i + j) < n; ++j)
            d[i + j] = f.add(d[i + j], f.mul(xs.num[i], ys.num[j]));
    }
    return uc_series(c, e, d, cap);
}

UCoef uc_inv(const LaurentCtx& c, const UCoef& x) {
    Fq f{c.q};
    if (x.num.empty()) {
        if (x.exact) throw DomainError("division by zero");
        throw IndeterminateValuation("division by a coefficient that is zero to precision");
    }
    if (x.exact) return uc_exact(c, -x.e, x.den, x.num);
    int64_t r = x.cap - x.e;
    Poly s(static_cast<size_t>(r), 0);
    uint32_t d0 = f.inv(x.num[0]);
    s[0] = d0;
    for (int64_t k = 1; k < r; ++k) {
        uint32_t acc = 0;
        for (int64_t j = 1; j <= k && j < static_cast<int64_t>(x.num.size()); ++j)
            acc = f.add(acc, f.mul(x.num[j], s[k - j]));
        s[k] = f.neg(f.mul(d0, acc));
    }
    return uc_series(c, -x.e, s, -x.e + r);
}

LaurentValue lv_norm(LaurentValue x) {
    x.tcap = norm_inf(x.tcap);
    if (!is_inf(x.tcap)) {
        int64_t keep = std::max<int64_t>(0, x.tcap - x.tlow);
        if (static_cast<int64_t>(x.c.size()) > keep) x.c.resize(static_cast<size_t>(keep));
    }
    size_t lead = 0;
    while (lead < x.c.size() && uc_exact_zero(x.c[lead])) ++lead;
    if (lead) {
        x.c.erase(x.c.begin(), x.c.begin() + static_cast<std::ptrdiff_t>(lead));
        x.tlow += static_cast<int64_t>(lead);
    }
    while (!x.c.empty() && uc_exact_zero(x.c.back())) x.c.pop_back();
    if (x.c.empty()) x.tlow = is_inf(x.tcap) ? 0 : x.tcap;
    return x;
}

UCoef coef_at(const LaurentValue& x, int64_t k) {
    int64_t i = k - x.tlow;
    if (i < 0 || i >= static_cast<int64_t>(x.c.size())) return uc_zero();
    return x.c[static_cast<size_t>(i)];
}

int64_t t_lower(const LaurentValue& x) { return x.c.empty() ? x.tcap : x.tlow; }

}  // namespace

UCoef uc_exact(const LaurentCtx& c, int64_t e, Poly num, Poly den) {
    Fq f{c.q};
    trim(num);
    trim(den);
    if (den.empty()) throw DomainError("zero denominator");
    if (num.empty()) return uc_zero();
    int64_t k = pval(num);
    num.erase(num.begin(), num.begin() + k);
    e += k;
    int64_t k2 = pval(den);
    den.erase(den.begin(), den.begin() + k2);
    e -= k2;
    if (den.size() > 1 && num.size() > 1) {
        Poly g = pgcd(f, num, den);
        if (g.size() > 1) {
            Poly qq, r;
            pdivmod(f, num, g, qq, r);
            num = qq;
            pdivmod(f, den, g, qq, r);
            den = qq;
        }
    }
    uint32_t s = f.inv(den[0]);
    UCoef x;
    x.exact = true;
    x.e = e;
    x.num = pscale(f, num, s);
    x.den = pscale(f, den, s);
    x.cap = kInf;
    return x;
}

LaurentValue lv_exact_zero() { return LaurentValue{}; }

LaurentValue lv_monomial(const LaurentCtx& c, uint32_t digit, int64_t i, int64_t j) {
    digit %= c.q;
    if (digit == 0) return lv_exact_zero();
    LaurentValue x;
    x.tlow = i;
    x.c.push_back(uc_exact(c, j, Poly{digit}, Poly{1}));
    x.tcap = kInf;
    return x;
}

LaurentValue lv_from_coeffs(const LaurentCtx& c, int64_t tlow, std::vector<UCoef> coeffs, int64_t tcap) {
    (void)c;
    LaurentValue x;
    x.tlow = tlow;
    x.c = std::move(coeffs);
    x.tcap = tcap;
    return lv_norm(std::move(x));
}

bool lv_is_exact_zero(const LaurentValue& x) { return x.c.empty() && is_inf(x.tcap); }

bool lv_is_known_zero(const LaurentValue& x) {
    for (const auto& u : x.c)
        if (!u.num.empty()) return false;
    return true;
}

LaurentValue lv_add(const LaurentCtx& c, const LaurentValue& x, const LaurentValue& y) {
    if (lv_is_exact_zero(x)) return y;
    if (lv_is_exact_zero(y)) return x;
    LaurentValue r;
    r.tcap = std::min(x.tcap, y.tcap);
    int64_t lo = std::min(x.c.empty() ? kInf : x.tlow, y.c.empty() ? kInf : y.tlow);
    int64_t hi = std::max(x.tlow + static_cast<int64_t>(x.c.size()), y.tlow + static_cast<int64_t>(y.c.size()));
    hi = std::min(hi, r.tcap);
    if (is_inf(lo) || lo >= hi) {
        r.tlow = 0;
        return lv_norm(r);
    }
    r.tlow = lo;
    for (int64_t k = lo; k < hi; ++k) r.c.push_back(uc_add(c, coef_at(x, k), coef_at(y, k)));
    return lv_norm(std::move(r));
}

LaurentValue lv_neg(const LaurentCtx& c, const LaurentValue& x) {
    LaurentValue r = x;
    for (auto& u : r.c) u = uc_neg(c, u);
    return r;
}

LaurentValue lv_mul(const LaurentCtx& c, const LaurentValue& x, const LaurentValue& y) {
    if (lv_is_exact_zero(x) || lv_is_exact_zero(y)) return lv_exact_zero();
    LaurentValue r;
    r.tcap = norm_inf(std::min(norm_inf(x.tcap + t_lower(y)), norm_inf(y.tcap + t_lower(x))));
    if (!is_inf(r.tcap)) r.tcap = std::min(r.tcap, c.nt);
    if (x.c.empty() || y.c.empty()) return lv_norm(r);
    r.tlow = x.tlow + y.tlow;
    int64_t n = static_cast<int64_t>(x.c.size() + y.c.size()) - 1;
    if (!is_inf(r.tcap)) n = std::min(n, r.tcap - r.tlow);
    for (int64_t k = 0; k < n; ++k) {
        UCoef acc = uc_zero();
        for (int64_t i = 0; i <= k && i < static_cast<int64_t>(x.c.size()); ++i) {
            int64_t j = k - i;
            if (j >= static_cast<int64_t>(y.c.size())) continue;
            acc = uc_add(c, acc, uc_mul(c, x.c[i], y.c[j]));
        }
        r.c.push_back(std::move(acc));
    }
    return lv_norm(std::move(r));
}

LaurentValue lv_inv(const LaurentCtx& c, const LaurentValue& x) {
    if (lv_is_exact_zero(x)) throw DomainError("division by zero");
    if (x.c.empty() || uc_known_zero(x.c[0]))
        throw IndeterminateValuation("division by an element whose leading term is undetermined");
    if (x.c.size() == 1 && is_inf(x.tcap)) {
        LaurentValue r;
        r.tlow = -x.tlow;
        r.c.push_back(uc_inv(c, x.c[0]));
        return r;
    }
    int64_t e = x.tlow;
    int64_t rel = is_inf(x.tcap) ? kInf : x.tcap - e;
    LaurentValue r;
    r.tlow = -e;
    r.tcap = std::min(norm_inf(-e + rel), c.nt);
    int64_t n = r.tcap - r.tlow;
    if (n <= 0) return lv_norm(r);
    UCoef y0 = uc_inv(c, x.c[0]);
    r.c.push_back(y0);
    for (int64_t k = 1; k < n; ++k) {
        UCoef acc = uc_zero();
        for (int64_t j = 1; j <= k && j < static_cast<int64_t>(x.c.size()); ++j)
            acc = uc_add(c, acc, uc_mul(c, x.c[j], r.c[k - j]));
        r.c.push_back(uc_neg(c, uc_mul(c, y0, acc)));
    }
    return lv_norm(std::move(r));
}

UCoef uc_to_series_public(const LaurentCtx& c, const UCoef& x, int64_t cap) { return uc_to_series(c, x, cap); }

LaurentValue lv_to_series(const LaurentCtx& c, const LaurentValue& x) {
    LaurentValue r = x;
    for (auto& u : r.c)
        if (!uc_exact_zero(u)) u = uc_to_series(c, u, std::min(uc_cap(u), c.nu + 1));
    return lv_norm(std::move(r));
}

LaurentValue lv_truncate(const LaurentCtx& c, const LaurentValue& x, const ValGroupElem& g) {
    if (g.is_top()) return x;
    LaurentValue r = x;
    r.tcap = std::min(r.tcap, g[0] + 1);
    r = lv_norm(std::move(r));
    int64_t i = g[0] - r.tlow;
    if (i >= 0 && i < static_cast<int64_t>(r.c.size())) {
        UCoef& u = r.c[static_cast<size_t>(i)];
        if (uc_exact_zero(u))
            u = uc_series(c, g[1], {}, g[1]);
        else
            u = uc_to_series(c, u, std::min(uc_cap(u), g[1]));
    } else if (i >= static_cast<int64_t>(r.c.size()) && g[0] < r.tcap) {
        // t^g0 coefficient becomes a zero series at cap g1.
        while (static_cast<int64_t>(r.c.size()) < i) r.c.push_back(uc_zero());
        if (r.c.empty()) r.tlow = g[0];
        r.c.push_back(uc_series(c, g[1], {}, g[1]));
    }
    return lv_norm(std::move(r));
}

ValGroupElem lv_leading(const LaurentValue& x) {
    for (size_t i = 0; i < x.c.size(); ++i)
        if (!x.c[i].num.empty()) return ValGroupElem::of(x.tlow + static_cast<int64_t>(i), x.c[i].e);
    return ValGroupElem::top(2);
}

ValGroupElem lv_known_to(const LaurentValue& x) {
    ValGroupElem best = ValGroupElem::top(2);
    for (size_t i = 0; i < x.c.size(); ++i) {
        if (x.c[i].exact) continue;
        best = std::min(best, ValGroupElem::of(x.tlow + static_cast<int64_t>(i), x.c[i].cap));
        break;  // later coefficients cannot lower the bound
    }
    if (!is_inf(x.tcap)) best = std::min(best, ValGroupElem::of(x.tcap, kNegInf));
    return best;
}

uint32_t lv_residue(const LaurentCtx& c, const LaurentValue& x) {
    if (x.tcap <= 0) throw IndeterminateValuation("residue undetermined at t-precision");
    UCoef u = coef_at(x, 0);
    if (uc_exact_zero(u)) return 0;
    if (!u.exact && u.cap <= 0) throw IndeterminateValuation("residue undetermined at u-precision");
    if (u.num.empty() || u.e > 0) return 0;
    if (u.e < 0) throw DomainError("residue of an element outside the valuation ring");
    (void)c;
    return u.num[0];
}

std::vector<uint32_t> lv_low_digits(const LaurentCtx& c, const LaurentValue& x, int64_t k) {
    std::vector<uint32_t> out(static_cast<size_t>(std::max<int64_t>(k, 0)), 0);
    if (k <= 0) return out;
    if (x.tcap <= 0) throw IndeterminateValuation("t^0 coefficient unknown");
    UCoef u = coef_at(x, 0);
    if (uc_exact_zero(u)) return out;
    for (auto [e, d] : uc_terms(c, u, k)) {
        if (e < 0) throw DomainError("element outside the valuation ring");
        out[static_cast<size_t>(e)] = d;
    }
    if (!u.exact && u.cap < k) throw IndeterminateValuation("t^0 coefficient known only modulo u^" + std::to_string(u.cap));
    return out;
}

std::vector<std::pair<int64_t, uint32_t>> uc_terms(const LaurentCtx& c, const UCoef& x, int64_t cap) {
    std::vector<std::pair<int64_t, uint32_t>> out;
    if (uc_exact_zero(x)) return out;
    UCoef s = x;
    if (x.exact && x.den.size() == 1) {
        for (size_t i = 0; i < x.num.size(); ++i)
            if (x.num[i] && x.e + static_cast<int64_t>(i) < cap) out.emplace_back(x.e + static_cast<int64_t>(i), x.num[i]);
        return out;
    }
    LaurentCtx wide = c;
    wide.nu = std::max(c.nu, cap);
    s = uc_to_series(wide, x, cap);
    for (size_t i = 0; i < s.num.size(); ++i)
        if (s.num[i] && s.e + static_cast<int64_t>(i) < cap) out.emplace_back(s.e + static_cast<int64_t>(i), s.num[i]);
    return out;
}

std::string lv_to_string(const LaurentCtx& c, const LaurentValue& x) {
    if (lv_is_exact_zero(x)) return "0";
    std::ostringstream os;
    bool first = true;
    auto term = [&](uint32_t d, int64_t i, int64_t j) {
        if (!first) os << " + ";
        first = false;
        os << d;
        if (i) os << "*t^" << i;
        if (j) os << "*u^" << j;
    };
    for (size_t k = 0; k < x.c.size(); ++k) {
        const UCoef& u = x.c[k];
        int64_t i = x.tlow + static_cast<int64_t>(k);
        if (u.exact && u.den.size() > 1) {
            if (!first) os << " + ";
            first = false;
            auto poly = [&](const Poly& q) {
                std::string r;
                for (size_t j = 0; j < q.size(); ++j) {
                    if (!q[j]) continue;
                    if (!r.empty()) r += " + ";
                    r += std::to_string(q[j]);
                    if (j) r += "*u^" + std::to_string(j);
                }
                return r;
            };
            os << "t^" << i << "*u^" << u.e << "*(" << poly(u.num) << ")/(" << poly(u.den) << ")";
            continue;
        }
        for (auto [j, d] : uc_terms(c, u, u.exact ? kInf : u.cap)) term(d, i, j);
        if (!u.exact) {
            if (!first) os << " + ";
            first = false;
            os << "O(t^" << i << "*u^" << u.cap << ")";
        }
    }
    if (!is_inf(x.tcap)) {
        if (!first) os << " + ";
        os << "O(t^" << x.tcap << ")";
    }
    return os.str();
}

}  // namespace vlat::detail
