#include "vlat/ring.hpp"

#include "dvr.hpp"
#include "laurent.hpp"
#include "vlat/errors.hpp"

namespace vlat {

using detail::DvrValue;
using detail::LaurentValue;

namespace {

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

detail::DvrCtx dctx(const RingConfig& r) {
    return detail::DvrCtx{r.kind == RingKind::ramified2, r.kind == RingKind::padic ? r.p : 2u, r.precision[0]};
}

detail::LaurentCtx lctx(const RingConfig& r) {
    return detail::LaurentCtx{r.p, r.precision[0], r.precision[1]};
}

}  // namespace

// ---------------------------------------------------------------- RingConfig

RingConfig RingConfig::padic(uint32_t p, int64_t n) {
    if (p == 2 || !is_prime(p)) throw ConfigError("padic backend needs an odd prime, got " + std::to_string(p));
    if (n < 1) throw ConfigError("precision must be positive");
    return RingConfig{RingKind::padic, p, ValGroupElem::of(n)};
}

RingConfig RingConfig::two_adic(int64_t n) {
    if (n < 1) throw ConfigError("precision must be positive");
    return RingConfig{RingKind::two_adic, 2, ValGroupElem::of(n)};
}

RingConfig RingConfig::ramified2(int64_t n) {
    if (n < 1) throw ConfigError("precision must be positive");
    return RingConfig{RingKind::ramified2, 2, ValGroupElem::of(n)};
}

RingConfig RingConfig::laurent2(uint32_t q, int64_t nt, int64_t nu) {
    if (q == 2 || !is_prime(q)) throw ConfigError("laurent2 backend needs an odd prime, got " + std::to_string(q));
    if (nt < 1 || nu < 1) throw ConfigError("precision must be positive");
    return RingConfig{RingKind::laurent2, q, ValGroupElem::of(nt, nu)};
}

ValGroupElem RingConfig::v2() const {
    switch (kind) {
        case RingKind::two_adic: return ValGroupElem::of(1);
        case RingKind::ramified2: return ValGroupElem::of(2);
        case RingKind::padic: return ValGroupElem::of(0);
        case RingKind::laurent2: return ValGroupElem::of(0, 0);
    }
    return ValGroupElem::of(0);
}

RingConfig RingConfig::with_precision(const ValGroupElem& cap) const {
    if (cap.rank() != value_rank()) throw ConfigError("precision has the wrong value group");
    RingConfig r = *this;
    r.precision = cap;
    return r;
}

std::string RingConfig::name() const {
    switch (kind) {
        case RingKind::padic: return "padic(" + std::to_string(p) + ")";
        case RingKind::two_adic: return "two_adic";
        case RingKind::ramified2: return "ramified2";
        case RingKind::laurent2: return "laurent2(" + std::to_string(p) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- ResidueElem

ResidueElem::ResidueElem(uint32_t value, uint32_t p) : v_(value % p), p_(p) {}

ResidueElem ResidueElem::operator+(const ResidueElem& o) const { return ResidueElem((v_ + o.v_) % p_, p_); }
ResidueElem ResidueElem::operator-(const ResidueElem& o) const { return ResidueElem((v_ + p_ - o.v_) % p_, p_); }
ResidueElem ResidueElem::operator-() const { return ResidueElem((p_ - v_) % p_, p_); }
ResidueElem ResidueElem::operator*(const ResidueElem& o) const {
    return ResidueElem(static_cast<uint32_t>(uint64_t(v_) * o.v_ % p_), p_);
}

ResidueElem ResidueElem::pow(uint64_t e) const {
    ResidueElem r(1, p_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

ResidueElem ResidueElem::inverse() const {
    if (v_ == 0) throw DomainError("inverse of zero in the residue field");
    return pow(p_ - 2);
}

bool ResidueElem::is_square() const {
    if (v_ == 0) return false;
    if (p_ == 2) return true;
    return pow((p_ - 1) / 2).value() == 1;
}

ResidueElem ResidueElem::sqrt() const {
    if (v_ == 0 || p_ == 2) return *this;
    for (uint32_t r = 1; r < p_; ++r)
        if (uint64_t(r) * r % p_ == v_) return ResidueElem(r, p_);
    throw NoSolution("not a square in the residue field");
}

// ---------------------------------------------------------------- RingElem

RingElem::RingElem() : ring_(), rep_(detail::dvr_exact_zero()) {}

RingElem::RingElem(const RingConfig& ring, DvrValue v) : ring_(ring), rep_(std::move(v)) {}
RingElem::RingElem(const RingConfig& ring, LaurentValue v) : ring_(ring), rep_(std::move(v)) {}

RingElem::RingElem(const RingConfig& ring, long n) : RingElem(from_int(ring, mpz_class(n))) {}

RingElem RingElem::from_int(const RingConfig& ring, const mpz_class& n) {
    if (ring.discrete()) return RingElem(ring, detail::dvr_from_int(dctx(ring), n));
    long r = mpz_fdiv_ui(n.get_mpz_t(), ring.p);
    return RingElem(ring, detail::lv_monomial(lctx(ring), static_cast<uint32_t>(r), 0, 0));
}

RingElem RingElem::zero(const RingConfig& ring) {
    if (ring.discrete()) return RingElem(ring, detail::dvr_exact_zero());
    return RingElem(ring, detail::lv_exact_zero());
}

RingElem RingElem::one(const RingConfig& ring) { return from_int(ring, 1); }

RingElem RingElem::ramified(const RingConfig& ring, const mpz_class& a, const mpz_class& b) {
    if (ring.kind != RingKind::ramified2) throw ConfigError("a + b*pi needs the ramified2 backend");
    if (a == 0 && b == 0) return zero(ring);
    auto c = dctx(ring);
    return RingElem(ring, detail::dvr_make(c, 0, a, b, c.cap));
}

RingElem RingElem::laurent(const RingConfig& ring, const Terms& terms) {
    if (ring.kind != RingKind::laurent2) throw ConfigError("term maps need the laurent2 backend");
    auto c = lctx(ring);
    LaurentValue acc = detail::lv_exact_zero();
    for (const auto& [i, row] : terms)
        for (const auto& [j, d] : row) acc = detail::lv_add(c, acc, detail::lv_monomial(c, d, i, j));
    return RingElem(ring, acc);
}

RingElem RingElem::sigma(const RingConfig& ring, const ValGroupElem& v) {
    if (v.is_top()) return zero(ring);
    if (v.rank() != ring.value_rank()) throw ConfigError("valuation from the wrong value group");
    if (!ring.discrete()) return RingElem(ring, detail::lv_monomial(lctx(ring), 1, v[0], v[1]));
    auto c = dctx(ring);
    DvrValue x;
    x.known_zero = false;
    x.val = v[0];
    x.abs = std::min(c.cap, v[0] + c.cap);
    x.a = 1;
    x.b = 0;
    if (x.abs <= x.val) {
        x.known_zero = true;
        x.a = 0;
    }
    return RingElem(ring, std::move(x));
}

RingElem RingElem::lift(const RingConfig& ring, const ResidueElem& r) { return from_int(ring, r.value()); }

RingElem RingElem::from_dvr(const RingConfig& ring, DvrValue v) { return RingElem(ring, std::move(v)); }
RingElem RingElem::from_laurent(const RingConfig& ring, LaurentValue v) { return RingElem(ring, std::move(v)); }

void RingElem::check_ring(const RingElem& o) const {
    if (!(ring_ == o.ring_)) throw ConfigError("ring mismatch: " + ring_.name() + " vs " + o.ring_.name());
}

bool RingElem::is_exact_zero() const {
    if (auto d = dvr()) return d->known_zero && d->abs == detail::kInf;
    return detail::lv_is_exact_zero(*laurent());
}

bool RingElem::is_zero() const {
    if (auto d = dvr()) return d->known_zero;
    return detail::lv_is_known_zero(*laurent());
}

ValGroupElem RingElem::known_to() const {
    if (auto d = dvr()) return d->abs == detail::kInf ? ValGroupElem::top(1) : ValGroupElem::of(d->abs);
    return detail::lv_known_to(*laurent());
}

bool RingElem::certified() const {
    if (auto d = dvr()) return !d->known_zero || d->abs == detail::kInf;
    if (is_exact_zero()) return true;
    return detail::lv_leading(*laurent()) < known_to();
}

ValGroupElem RingElem::valuation() const {
    if (auto d = dvr()) {
        if (!d->known_zero) return ValGroupElem::of(d->val);
        if (d->abs == detail::kInf) return ValGroupElem::top(1);
        throw IndeterminateValuation("element is zero to precision " + std::to_string(d->abs) + " (capped)");
    }
    if (is_exact_zero()) return ValGroupElem::top(2);
    ValGroupElem lead = detail::lv_leading(*laurent());
    ValGroupElem kt = known_to();
    if (lead < kt) return lead;
    throw IndeterminateValuation("valuation undetermined below " + kt.to_string());
}

ValGroupElem RingElem::lower_bound() const {
    if (auto d = dvr()) {
        if (d->known_zero) return d->abs == detail::kInf ? ValGroupElem::top(1) : ValGroupElem::of(d->abs);
        return ValGroupElem::of(d->val);
    }
    return std::min(detail::lv_leading(*laurent()), known_to());
}

bool RingElem::val_ge(const ValGroupElem& g) const {
    if (certified()) return valuation() >= g;
    if (lower_bound() >= g) return true;
    throw IndeterminateValuation("cannot decide v(x) >= " + g.to_string() + " at precision " +
                                 known_to().to_string());
}

bool RingElem::val_gt(const ValGroupElem& g) const {
    if (certified()) return valuation() > g;
    if (lower_bound() > g) return true;
    throw IndeterminateValuation("cannot decide v(x) > " + g.to_string() + " at precision " +
                                 known_to().to_string());
}

bool RingElem::is_unit() const {
    return !val_gt(ring_.zero_value()) && val_ge(ring_.zero_value());
}

bool RingElem::in_ring() const { return val_ge(ring_.zero_value()); }

ResidueElem RingElem::residue() const {
    if (!val_ge(ring_.zero_value())) throw DomainError("residue of an element outside the valuation ring");
    uint32_t p = ring_.residue_char();
    if (auto d = dvr()) return ResidueElem(detail::dvr_residue(dctx(ring_), *d), p);
    if (val_gt(ring_.zero_value())) return ResidueElem(0, p);
    return ResidueElem(detail::lv_residue(lctx(ring_), *laurent()), p);
}

RingElem RingElem::operator+(const RingElem& o) const {
    check_ring(o);
    if (auto d = dvr()) return RingElem(ring_, detail::dvr_add(dctx(ring_), *d, *o.dvr()));
    return RingElem(ring_, detail::lv_add(lctx(ring_), *laurent(), *o.laurent()));
}

RingElem RingElem::operator-() const {
    if (auto d = dvr()) return RingElem(ring_, detail::dvr_neg(dctx(ring_), *d));
    return RingElem(ring_, detail::lv_neg(lctx(ring_), *laurent()));
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
    check_ring(o);
    if (auto d = dvr()) return RingElem(ring_, detail::dvr_mul(dctx(ring_), *d, *o.dvr()));
    return RingElem(ring_, detail::lv_mul(lctx(ring_), *laurent(), *o.laurent()));
}

RingElem RingElem::inverse() const {
    if (auto d = dvr()) return RingElem(ring_, detail::dvr_inv(dctx(ring_), *d));
    return RingElem(ring_, detail::lv_inv(lctx(ring_), *laurent()));
}

RingElem RingElem::operator/(const RingElem& o) const {
    check_ring(o);
    return *this * o.inverse();
}

RingElem RingElem::pow(int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    RingElem r = one(ring_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

RingElem RingElem::truncated(const ValGroupElem& g) const {
    if (auto d = dvr()) {
        if (g.is_top()) return *this;
        return RingElem(ring_, detail::dvr_truncate(dctx(ring_), *d, g[0]));
    }
    return RingElem(ring_, detail::lv_truncate(lctx(ring_), *laurent(), g));
}

RingElem RingElem::with_ring(const RingConfig& ring) const {
    if (ring.kind != ring_.kind || ring.p != ring_.p)
        throw ConfigError("cannot move " + ring_.name() + " element to " + ring.name());
    if (auto d = dvr()) return RingElem(ring, detail::dvr_truncate(dctx(ring), *d, ring.precision[0]));
    const auto& x = *laurent();
    return RingElem(ring, detail::lv_from_coeffs(lctx(ring), x.tlow, x.c, std::min(x.tcap, ring.precision[0])));
}

std::string RingElem::to_string() const {
    if (auto d = dvr()) return detail::dvr_to_string(dctx(ring_), *d);
    return detail::lv_to_string(lctx(ring_), *laurent());
}

}  // namespace vlat
