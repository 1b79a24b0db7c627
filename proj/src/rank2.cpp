#include "vlat/rank2.hpp"

#include "vlat/errors.hpp"
#include "vlat/hensel.hpp"

namespace vlat {

namespace {

bool val_less(const RingElem& a, const RingElem& b) {
    if (a.is_exact_zero()) return false;
    if (b.is_exact_zero()) return true;
    return a.valuation() < b.valuation();
}

void require_char2(const RingConfig& R, const char* what) {
    if (R.v2().is_zero()) throw DomainError(std::string(what) + " needs residue characteristic 2");
}

// Unit c in R / pi^e (digit expansions), unit residue.
std::vector<RingElem> unit_reps(const RingConfig& R, int64_t e) {
    std::vector<RingElem> out;
    for (const auto& c : digit_expansions(R, 0, std::max<int64_t>(e, 1)))
        if (!c.is_zero() && c.is_unit()) out.push_back(c);
    return out;
}

int64_t as_int(const ValGroupElem& v) { return v[0]; }

}  // namespace

GramLattice Rank2Form::lattice() const {
    Matrix G(ring(), 2, 2);
    G(0, 0) = alpha;
    G(0, 1) = G(1, 0) = RingElem::one(ring());
    G(1, 1) = beta;
    return GramLattice(G);
}

std::string Rank2Form::to_string() const { return "M_{" + alpha.to_string() + "," + beta.to_string() + "}"; }

Rank2Form make_rank2(const RingElem& alpha, const RingElem& beta) {
    Rank2Form F{alpha, beta, Matrix::identity(alpha.ring(), 2), false};
    return normalize_rank2(F.lattice());
}

Rank2Form normalize_rank2(const GramLattice& M) {
    if (M.rank() != 2) throw DomainError("rank 2 lattice expected");
    if (!is_unimodular(M)) throw DomainError("rank 2 lattice is not unimodular");
    const RingConfig& R = M.ring();
    Matrix B = Matrix::identity(R, 2);
    auto gram = [&] { return transform_gram(M, B); };
    GramLattice L = gram();
    if (!L(0, 1).is_unit()) {
        // Then x^2 or y^2 is a unit; make it the first vector and use x, x + y.
        if (!L(0, 0).is_unit()) B = Matrix::from_rows(R, {{0, 1}, {1, 0}});
        B = B * Matrix::from_rows(R, {{1, 1}, {0, 1}});
        L = gram();
    }
    RingElem s = L(0, 1).inverse();
    B.set_col(1, Vec{B(0, 1) * s, B(1, 1) * s});
    L = gram();
    if (val_less(L(1, 1), L(0, 0))) {
        B = B * Matrix::from_rows(R, {{0, 1}, {1, 0}});
        L = gram();
    }
    return Rank2Form{L(0, 0), L(1, 1), B, true};
}

MaximalNorm maximal_norm_search(const Rank2Form& F0) {
    Rank2Form F = F0;
    if (!F0.normalized) {
        F = normalize_rank2(F0.lattice());
        F.basis = F0.basis * F.basis;
    }
    const Rank2Form start = F;
    const RingConfig& R = F.ring();
    const ValGroupElem v2 = R.v2();
    const RingElem one = RingElem::one(R), two(R, 2);

    // y <- (y + u x) / (1 + u alpha); keeps (x, y) = 1.
    auto shift = [&](const RingElem& u) {
        RingElem p = one + u * F.alpha;
        RingElem nb = (F.alpha * u.square() + two * u + F.beta) / p.square();
        Vec y = F.basis.col(1), x = F.basis.col(0);
        F.basis.set_col(1, Vec{(y[0] + u * x[0]) / p, (y[1] + u * x[1]) / p});
        F.beta = nb;
    };
    MaximalNorm out;
    for (int step = 0;; ++step) {
        if (F.beta.is_exact_zero()) {
            out.isotropic = true;
            break;
        }
        ValGroupElem va = F.alpha.valuation();
        if (F.beta.val_gt(v2 + v2 - va)) {
            RingElem u = solve_quadratic(F.alpha, two, F.beta);
            shift(u);
            F.beta = RingElem::zero(R);
            out.isotropic = true;
            break;
        }
        if (v2.is_zero()) break;  // only the isotropic improvement applies
        ValGroupElem vb = F.beta.valuation();
        ValGroupElem s = va + vb;
        RingElem u;
        if (s < v2 + v2) {
            RingElem q = -F.beta / F.alpha;
            if (!is_approximate_square(q)) break;
            u = approximate_sqrt(q);
        } else {
            RingElem eps = F.alpha * F.beta / RingElem(R, 4);
            if (!in_artin_schreier_image(-eps)) break;
            // y + t x with t = -(2/alpha) s, s^2 - s + eps = 0
            RingElem r = artin_schreier_solve(-eps);
            u = -(two / F.alpha) * r;
        }
        shift(u);
        if (!F.beta.is_exact_zero() && !F.beta.val_gt(vb))
            throw DomainError("maximal norm search failed to raise the valuation");
        if (step > 4 * as_int(R.precision)) throw IndeterminateValuation("maximal norm search did not terminate");
    }
    out.form = F;
    Vec w = inverse(start.basis) * F.basis.col(1);
    out.t = w[0] / w[1];
    return out;
}

std::optional<Vec> isotropy_witness(const Rank2Form& F) {
    const RingConfig& R = F.ring();
    if (F.beta.is_exact_zero()) return Vec{RingElem::zero(R), RingElem::one(R)};
    if (F.alpha.is_exact_zero()) return Vec{RingElem::one(R), RingElem::zero(R)};
    MaximalNorm m = maximal_norm_search(F);
    if (!m.isotropic) return std::nullopt;
    // m.form.basis column 1 in the original coordinates; rewrite in F's x, y basis.
    Vec w = inverse(F.basis) * m.form.basis.col(1);
    return w;
}

bool norm_set_contains(const Rank2Form& F, const RingElem& g) {
    const RingConfig& R = F.ring();
    require_char2(R, "norm_set_contains");
    const ValGroupElem v2 = R.v2();
    if (!F.beta.is_exact_zero() && F.beta.valuation() < v2)
        throw DomainError("norm set description needs v(beta) >= v(2)");
    MinimalNormClass a{F.alpha, std::nullopt};
    if (!F.beta.is_exact_zero() && F.beta.valuation() == v2) a.tau = F.alpha * F.beta;
    if (g.is_exact_zero()) return false;
    return same_minimal_norm_class(a, MinimalNormClass{g, a.tau}).has_value();
}

std::string ArfInvariant::to_string() const {
    switch (kind) {
        case Kind::vanishing:
            return "vanishing";
        case Kind::odd:
            return "odd: v=" + valuation.to_string() + ", rep=" + representative.to_string();
        case Kind::even:
            return "even: v=" + valuation.to_string() + ", rep=" + representative.to_string();
        case Kind::exact: {
            RingElem eps = representative / RingElem(representative.ring(), 4);
            return "exact: 4*[" + std::to_string(eps.residue().value()) + "]";
        }
    }
    return "";
}

ArfInvariant generalized_arf(const Rank2Form& F) {
    const RingConfig& R = F.ring();
    require_char2(R, "generalized_arf");
    const ValGroupElem v2 = R.v2();
    ArfInvariant a;
    if (F.beta.is_exact_zero()) {
        a.kind = ArfInvariant::Kind::vanishing;
        a.valuation = R.top_value();
        a.representative = RingElem::zero(R);
        a.fine_class = RingElem::zero(R);
        return a;
    }
    RingElem ab = F.alpha * F.beta;
    ValGroupElem v = ab.valuation();
    a.valuation = v;
    a.representative = ab;
    if (v2 + v2 < v) throw DomainError("beta is not maximal: the form is isotropic");
    if (v < v2 + v2) {
        if (is_approximate_square(F.beta / F.alpha)) throw DomainError("beta is not maximal");
        a.kind = v.is_even() ? ArfInvariant::Kind::even : ArfInvariant::Kind::odd;
    } else {
        if (in_artin_schreier_image(ab / RingElem(R, 4))) throw DomainError("beta is not maximal");
        a.kind = ArfInvariant::Kind::exact;
    }
    bool odd_v2 = !v2.is_even();
    if (v2 < v || (v == v2 && odd_v2)) a.fine_class = ab;
    return a;
}

bool same_generalized_arf(const ArfInvariant& a, const ArfInvariant& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ArfInvariant::Kind::vanishing) return true;
    if (!(a.valuation == b.valuation)) return false;
    const RingConfig& R = a.representative.ring();
    RingElem d = a.representative - b.representative;
    switch (a.kind) {
        case ArfInvariant::Kind::odd:
            return d.val_gt(a.valuation);
        case ArfInvariant::Kind::even: {
            // difference modulo approximate squares of valuation v, plus I_v
            if (d.val_gt(a.valuation)) return true;
            if (!d.val_ge(a.valuation)) return false;
            RingElem lam = RingElem::sigma(R, a.valuation.half());
            return (d / lam.square()).residue().is_square();
        }
        case ArfInvariant::Kind::exact:
            return in_artin_schreier_image(d / RingElem(R, 4));
        default:
            return true;
    }
}

bool same_fine_arf(const ArfInvariant& a, const ArfInvariant& b) {
    if (!a.fine_class || !b.fine_class) throw DomainError("fine Arf invariant undefined at this valuation");
    return in_S(*a.fine_class - *b.fine_class);
}

MinimalNormClass minimal_norm_class(const Rank2Form& F) {
    const RingConfig& R = F.ring();
    require_char2(R, "minimal_norm_class");
    const ValGroupElem v2 = R.v2();
    MinimalNormClass c{F.alpha, std::nullopt};
    if (F.beta.is_exact_zero()) return c;
    if (F.beta.valuation() < v2) throw DomainError("minimal norm classes need v(beta) >= v(2)");
    if (F.beta.valuation() == v2) c.tau = F.alpha * F.beta;
    return c;
}

std::optional<RingElem> same_minimal_norm_class(const MinimalNormClass& a, const MinimalNormClass& b) {
    const RingElem& alpha = a.alpha;
    const RingElem& gamma = b.alpha;
    const RingConfig& R = alpha.ring();
    require_char2(R, "minimal norm class comparison");
    if (!R.discrete()) throw UnsupportedRegime("class comparison needs a discrete valuation");
    const ValGroupElem v2 = R.v2();
    const RingElem one = RingElem::one(R);
    if (a.tau.has_value() != b.tau.has_value()) return std::nullopt;
    if (!a.tau) {
        // gamma = c^2 (alpha + 2r); everything in 2R is one class
        bool ea = alpha.is_exact_zero() || alpha.val_ge(v2);
        bool eb = gamma.is_exact_zero() || gamma.val_ge(v2);
        if (ea || eb) return ea && eb ? std::optional<RingElem>(one) : std::nullopt;
        if (!(alpha.valuation() == gamma.valuation())) return std::nullopt;
        for (const auto& c : unit_reps(R, as_int(v2)))
            if ((gamma - c.square() * alpha).val_ge(v2)) return c;
        return std::nullopt;
    }
    // gamma / (c^2 alpha) - 1 in (4/tau) R_AS
    if (alpha.is_exact_zero() || gamma.is_exact_zero()) return std::nullopt;
    if (!(alpha.valuation() == gamma.valuation())) return std::nullopt;
    const RingElem& tau = *a.tau;
    RingElem four_over_tau = RingElem(R, 4) / tau;
    int64_t need = as_int(four_over_tau.valuation());
    int64_t e = std::max<int64_t>(1, (need + 2) / 2);
    for (const auto& c : unit_reps(R, e)) {
        RingElem q = gamma / (c.square() * alpha) - one;
        if (q.is_exact_zero() || !q.val_ge(four_over_tau.valuation())) continue;
        if (in_artin_schreier_image(q / four_over_tau)) return c;
    }
    return std::nullopt;
}

bool rank2_supported(const Rank2Form& F) {
    const RingConfig& R = F.ring();
    const ValGroupElem v2 = R.v2();
    if (v2.is_zero()) return false;
    if (F.beta.is_exact_zero()) return true;
    if (F.beta.valuation() < v2) return false;
    ValGroupElem v = (F.alpha * F.beta).valuation();
    if (v2 < v) return true;
    // Arf valuation exactly v(2): the same proofs go through when v(2) is odd.
    return v == v2 && !v2.is_even() && R.kind == RingKind::two_adic;
}

bool isomorphic_rank2(const Rank2Form& F0, const Rank2Form& G0) {
    const RingConfig& R = F0.ring();
    if (!(G0.ring() == R)) throw ConfigError("rank 2 forms over different rings");
    if (R.v2().is_zero()) throw UnsupportedRegime("rank 2 decision is for residue characteristic 2");
    Rank2Form F = maximal_norm_search(F0).form;
    Rank2Form G = maximal_norm_search(G0).form;
    ArfInvariant a = generalized_arf(F), b = generalized_arf(G);
    if (!same_generalized_arf(a, b)) return false;
    if (!rank2_supported(F) || !rank2_supported(G))
        throw UnsupportedRegime("rank 2 decision outside the supported regime: need v(beta) >= v(2) and Arf "
                                "valuation > v(2) (" +
                                F.to_string() + ", " + G.to_string() + ")");
    if (!same_fine_arf(a, b)) return false;
    return same_minimal_norm_class(minimal_norm_class(F), minimal_norm_class(G)).has_value();
}

}  // namespace vlat
