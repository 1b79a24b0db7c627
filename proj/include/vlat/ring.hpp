#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "vlat/detail/reps.hpp"
#include "vlat/value_group.hpp"

namespace vlat {

enum class RingKind { padic, two_adic, ramified2, laurent2 };

// Backend choice plus the absolute precision cap. For laurent2 the cap is the
// pair (N_t, N_u): t-degrees below N_t are kept and u-series stop at u^N_u.
struct RingConfig {
    RingKind kind = RingKind::padic;
    uint32_t p = 3;
    ValGroupElem precision = ValGroupElem::of(24);

    static RingConfig padic(uint32_t p, int64_t n = 24);
    static RingConfig two_adic(int64_t n = 48);
    static RingConfig ramified2(int64_t n = 64);
    static RingConfig laurent2(uint32_t q, int64_t nt = 6, int64_t nu = 16);

    int value_rank() const { return kind == RingKind::laurent2 ? 2 : 1; }
    bool discrete() const { return kind != RingKind::laurent2; }
    uint32_t residue_char() const { return kind == RingKind::padic || kind == RingKind::laurent2 ? p : 2; }
    ValGroupElem v2() const;
    ValGroupElem zero_value() const { return ValGroupElem::zero(value_rank()); }
    ValGroupElem top_value() const { return ValGroupElem::top(value_rank()); }
    RingConfig with_precision(const ValGroupElem& cap) const;
    std::string name() const;

    bool operator==(const RingConfig& o) const = default;
};

// Element of the prime residue field F_p.
class ResidueElem {
public:
    ResidueElem() = default;
    ResidueElem(uint32_t value, uint32_t p);

    uint32_t value() const { return v_; }
    uint32_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    ResidueElem operator+(const ResidueElem& o) const;
    ResidueElem operator-(const ResidueElem& o) const;
    ResidueElem operator-() const;
    ResidueElem operator*(const ResidueElem& o) const;
    ResidueElem inverse() const;
    ResidueElem pow(uint64_t e) const;
    // Nonzero square test; F_2 has only the square 1.
    bool is_square() const;
    // A square root when one exists (F_2: the element itself).
    ResidueElem sqrt() const;

    bool operator==(const ResidueElem& o) const = default;

private:
    uint32_t v_ = 0;
    uint32_t p_ = 2;
};

class RingElem {
public:
    using Terms = std::map<int64_t, std::map<int64_t, uint32_t>>;

    RingElem();
    RingElem(const RingConfig& ring, long n);

    static RingElem from_int(const RingConfig& ring, const mpz_class& n);
    static RingElem zero(const RingConfig& ring);
    static RingElem one(const RingConfig& ring);
    // a + b*pi over ramified2.
    static RingElem ramified(const RingConfig& ring, const mpz_class& a, const mpz_class& b);
    // Finite sum of c * t^i * u^j over laurent2, keyed by i then j. Exact.
    static RingElem laurent(const RingConfig& ring, const Terms& terms);
    // The fixed element of valuation v: p^v, pi^v, or t^a u^b.
    static RingElem sigma(const RingConfig& ring, const ValGroupElem& v);
    // Lift of a residue digit in {0, ..., p-1}.
    static RingElem lift(const RingConfig& ring, const ResidueElem& r);
    static RingElem from_dvr(const RingConfig& ring, detail::DvrValue v);
    static RingElem from_laurent(const RingConfig& ring, detail::LaurentValue v);

    const RingConfig& ring() const { return ring_; }

    bool is_exact_zero() const;
    // Zero to the known precision (exact or capped).
    bool is_zero() const;
    // True when the valuation is determined at the current precision.
    bool certified() const;
    ValGroupElem valuation() const;
    ValGroupElem known_to() const;
    // Always-valid lower bound for v(x).
    ValGroupElem lower_bound() const;
    // v(x) >= g and v(x) > g; throw IndeterminateValuation when undecidable.
    bool val_ge(const ValGroupElem& g) const;
    bool val_gt(const ValGroupElem& g) const;
    bool is_unit() const;
    bool in_ring() const;

    ResidueElem residue() const;

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator/(const RingElem& o) const;
    RingElem operator-() const;
    RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
    RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
    RingElem& operator*=(const RingElem& o) { return *this = *this * o; }
    RingElem inverse() const;
    RingElem pow(int64_t e) const;
    RingElem square() const { return *this * *this; }

    // Forget information at and beyond absolute precision g.
    RingElem truncated(const ValGroupElem& g) const;
    // The same element over a config of the same backend with another cap;
    // information beyond the new cap is dropped.
    RingElem with_ring(const RingConfig& ring) const;

    // x and o agree to the precision of their difference.
    bool congruent(const RingElem& o) const { return (*this - o).is_zero(); }
    bool operator==(const RingElem& o) const { return congruent(o); }

    std::string to_string() const;

    const detail::DvrValue* dvr() const { return std::get_if<detail::DvrValue>(&rep_); }
    const detail::LaurentValue* laurent() const { return std::get_if<detail::LaurentValue>(&rep_); }

private:
    RingElem(const RingConfig& ring, detail::DvrValue v);
    RingElem(const RingConfig& ring, detail::LaurentValue v);
    void check_ring(const RingElem& o) const;

    RingConfig ring_;
    std::variant<detail::DvrValue, detail::LaurentValue> rep_;
};

inline RingElem operator*(long n, const RingElem& x) { return RingElem(x.ring(), n) * x; }

}  // namespace vlat
