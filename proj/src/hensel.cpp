#include "vlat/hensel.hpp"

#include "laurent.hpp"
#include "vlat/errors.hpp"

namespace vlat {

namespace {

constexpr int kMaxNewton = 200;

// Exact laurent2 coefficients never settle under Newton; iterate on u-series.
RingElem as_series(const RingElem& x) {
    const RingConfig& R = x.ring();
    if (R.discrete()) return x;
    detail::LaurentCtx c{R.p, R.precision[0], R.precision[1]};
    return RingElem::from_laurent(R, detail::lv_to_series(c, *x.laurent()));
}

RingElem sigma_half(const RingElem& a) {
    return RingElem::sigma(a.ring(), a.valuation().half());
}

}  // namespace

RingElem solve_quadratic(const RingElem& A, const RingElem& B, const RingElem& C, bool large_root) {
    const RingConfig& R = B.ring();
    if (B.is_exact_zero()) {
        if (A.is_exact_zero()) throw DomainError("A = B = 0 in quadratic");
        throw DomainError("quadratic needs v(AC) > 2v(B), but B = 0");
    }
    ValGroupElem vb = B.valuation();
    RingElem AC = A * C;
    if (!AC.val_gt(vb.times(2))) throw DomainError("quadratic needs v(AC) > 2v(B)");
    if (A.is_exact_zero()) {
        if (large_root) throw DomainError("linear equation has a single root");
        return -C / B;
    }
    if (large_root) return -B / A - solve_quadratic(A, B, C, false);
    if (C.is_exact_zero()) return RingElem::zero(R);

    // t = -(C/B) w where w = 1 + eps w^2, eps = AC/B^2, v(eps) > 0.
    RingElem eps = as_series(AC / B.square());
    RingElem one = RingElem::one(R);
    RingElem w = one;
    for (int it = 0;; ++it) {
        if (it == kMaxNewton) throw IndeterminateValuation("Newton iteration did not settle at this precision");
        RingElem f = eps * w.square() - w + one;
        RingElem df = RingElem(R, 2) * eps * w - one;
        RingElem next = w - f / df;
        bool done = (next - w).is_zero();
        w = next;
        if (done) break;
    }
    return -(C / B) * w;
}

RingElem sqrt_one_plus(const RingElem& y) {
    const RingConfig& R = y.ring();
    if (!y.val_gt(R.v2().times(2))) throw DomainError("sqrt_one_plus needs v(y) > 2v(2)");
    return solve_quadratic(RingElem::one(R), RingElem(R, 2), -y);
}

RingElem artin_schreier_solve(const RingElem& y, uint32_t residue_hint) {
    const RingConfig& R = y.ring();
    if (R.residue_char() != 2) throw DomainError("Artin-Schreier equation needs residue characteristic 2");
    if (!y.in_ring()) throw DomainError("Artin-Schreier argument outside the valuation ring");
    if (!y.residue().is_zero()) throw NoSolution("residue of y is not of the form c^2 - c");
    RingElem x0(R, residue_hint & 1);
    RingElem one = RingElem::one(R);
    RingElem s = solve_quadratic(one, RingElem(R, 2) * x0 - one, x0.square() - x0 - y);
    return x0 + s;
}

bool in_artin_schreier_image(const RingElem& y) {
    const RingConfig& R = y.ring();
    if (R.residue_char() != 2) throw DomainError("Artin-Schreier image needs residue characteristic 2");
    if (!y.in_ring()) return false;
    return y.residue().is_zero();
}

bool is_residual_square(const RingElem& a) {
    if (!a.is_unit()) throw DomainError("residual square test needs a unit");
    return a.residue().is_square();
}

bool is_approximate_square(const RingElem& a) {
    ValGroupElem v = a.valuation();
    if (v.is_top()) throw DomainError("approximate square test needs a nonzero element");
    if (!v.is_even()) return false;
    return is_residual_square(a / sigma_half(a).square());
}

RingElem approximate_sqrt(const RingElem& a) {
    if (!is_approximate_square(a)) throw NoSolution("not an approximate square");
    RingElem s = sigma_half(a);
    return s * RingElem::lift(a.ring(), (a / s.square()).residue().sqrt());
}

bool in_S(const RingElem& d) {
    const RingConfig& R = d.ring();
    ValGroupElem v2 = R.v2();
    if (!v2.positive()) throw DomainError("S is only defined when v(2) > 0");
    if (!d.val_gt(v2)) return false;
    if (d.val_gt(v2.times(2))) return true;
    // v(2) < v(d) <= 2v(2): fix t modulo pi^(2v(2)+1), then lift with the quadratic.
    RingElem two(R, 2);
    for (const RingElem& t0 : digit_expansions(R, v2[0] / 2 + 1, 2 * v2[0] + 1)) {
        RingElem rest = d - two * t0 - t0.square();
        if (rest.val_gt(v2.times(2))) return true;
    }
    return false;
}

std::vector<RingElem> digit_expansions(const RingConfig& R, int64_t lo, int64_t hi) {
    if (!R.discrete()) throw DomainError("digit expansions need a discrete backend");
    std::vector<RingElem> out{RingElem::zero(R)};
    for (int64_t i = lo; i < hi; ++i) {
        RingElem pi_i = RingElem::sigma(R, ValGroupElem::of(i));
        std::vector<RingElem> next;
        next.reserve(out.size() * R.residue_char());
        for (const auto& x : out)
            for (uint32_t d = 0; d < R.residue_char(); ++d)
                next.push_back(d == 0 ? x : x + RingElem(R, d) * pi_i);
        out = std::move(next);
    }
    return out;
}

}  // namespace vlat
