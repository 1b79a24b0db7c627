#include "vlat/canonical.hpp"

#include <algorithm>
#include <set>

#include "vlat/errors.hpp"
#include "vlat/hensel.hpp"
#include "vlat/oracle.hpp"

namespace vlat {

namespace {

std::vector<size_t> iota(size_t from, size_t n) {
    std::vector<size_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = from + i;
    return v;
}

// v(a - 1), top when a - 1 is zero to precision.
ValGroupElem closeness(const RingElem& a) {
    RingElem d = a - RingElem::one(a.ring());
    return d.is_zero() ? a.ring().top_value() : d.valuation();
}

ValGroupElem val_or_top(const RingElem& a) { return a.is_zero() ? a.ring().top_value() : a.valuation(); }

std::string short_str(const RingElem& x) {
    std::string s = x.to_string();
    auto cut = s.find(" + O(");
    return cut == std::string::npos ? s : s.substr(0, cut);
}

CanonicalOrder compare_desc(std::vector<ValGroupElem> a, std::vector<ValGroupElem> b) {
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] > b[i]) return CanonicalOrder::more_canonical;
        if (a[i] < b[i]) return CanonicalOrder::less_canonical;
    }
    return CanonicalOrder::equal;
}

CanonicalOrder compare_block(const Presentation& A, const Presentation& B, size_t k) {
    const PresentedBlock& a = A.blocks[k];
    const PresentedBlock& b = B.blocks[k];
    GramLattice UA = A.unimodular(k), UB = B.unimodular(k);
    ValGroupElem da = closeness(UA.det()), db = closeness(UB.det());
    if (da > db) return CanonicalOrder::more_canonical;
    if (da < db) return CanonicalOrder::less_canonical;
    if (a.orthogonal() != b.orthogonal()) return CanonicalOrder::incomparable;
    std::vector<ValGroupElem> ca, cb;
    if (a.orthogonal()) {
        for (size_t i = 0; i < UA.rank(); ++i) ca.push_back(closeness(UA(i, i)));
        for (size_t i = 0; i < UB.rank(); ++i) cb.push_back(closeness(UB(i, i)));
        auto in_one_plus_i0 = [](const std::vector<ValGroupElem>& c) {
            return std::count_if(c.begin(), c.end(), [](const ValGroupElem& g) { return g.positive(); });
        };
        auto na = in_one_plus_i0(ca), nb = in_one_plus_i0(cb);
        if (na != nb) return na > nb ? CanonicalOrder::more_canonical : CanonicalOrder::less_canonical;
        return compare_desc(ca, cb);
    }
    bool planes_a = std::all_of(a.pieces.begin(), a.pieces.end(), [](size_t s) { return s == 2; });
    bool planes_b = std::all_of(b.pieces.begin(), b.pieces.end(), [](size_t s) { return s == 2; });
    if (!planes_a || !planes_b) return CanonicalOrder::incomparable;
    auto arf_vals = [](const GramLattice& U) {
        std::vector<ValGroupElem> out;
        for (size_t p = 0; p + 1 < U.rank(); p += 2)
            out.push_back(val_or_top(U(p, p) * U(p + 1, p + 1) / U(p, p + 1).square()));
        return out;
    };
    return compare_desc(arf_vals(UA), arf_vals(UB));
}

Presentation with_basis(const Presentation& P, const Matrix& basis) {
    Presentation Q = P;
    Q.basis = basis;
    Q.gram = transform_gram(P.source, basis);
    return Q;
}

// Replace the listed columns of P's basis by (those columns) * T.
Presentation recombine(const Presentation& P, const std::vector<size_t>& cols, const Matrix& T) {
    Matrix old = P.basis.submatrix(iota(0, P.basis.rows()), cols);
    Matrix fresh = old * T;
    Matrix B = P.basis;
    for (size_t c = 0; c < cols.size(); ++c) B.set_col(cols[c], fresh.col(c));
    return with_basis(P, B);
}

struct Candidate {
    std::string name;
    Presentation after;
};

void rep1_candidates(const Presentation& P, size_t k, std::vector<Candidate>& out) {
    const PresentedBlock& blk = P.blocks[k];
    if (!blk.orthogonal()) return;
    GramLattice U = P.unimodular(k);
    const RingElem one = RingElem::one(U.ring());
    for (size_t a = 0; a < U.rank(); ++a)
        for (size_t b = a + 1; b < U.rank(); ++b) {
            size_t x = a, y = b;
            if (val_or_top(U(x, x) - one) > val_or_top(U(y, y) - one)) std::swap(x, y);
            auto t = rep1_optimal_t(U(x, x) - one, U(y, y) - one);
            if (!t) continue;
            Rep1Result res = rep1_transform(U(x, x) - one, U(y, y) - one, *t);
            // Divide out the square factor: norms become exactly (1+r)(1+s) and 1.
            RingElem inv = res.det.inverse();
            res.basis(0, 0) *= inv;
            res.basis(1, 0) *= inv;
            out.push_back({"rep1(block " + std::to_string(k) + ", " + std::to_string(x) + ", " +
                               std::to_string(y) + ", t=" + short_str(*t) + ")",
                           recombine(P, {blk.offset + x, blk.offset + y}, res.basis)});
        }
}

void rescale_candidates(const Presentation& P, size_t k, std::vector<Candidate>& out) {
    const PresentedBlock& blk = P.blocks[k];
    if (!blk.orthogonal()) return;
    GramLattice U = P.unimodular(k);
    const RingConfig& R = U.ring();
    const ValGroupElem v2 = R.v2();
    for (size_t a = 0; a < U.rank(); ++a) {
        ValGroupElem m = closeness(U(a, a));
        if (m.is_top() || !U(a, a).is_unit()) continue;
        std::vector<RingElem> cs;
        if (m > v2.times(2)) {
            cs.push_back(RingElem::one(R) + sqrt_one_plus(U(a, a) - RingElem::one(R)));
        } else {
            for (const RingElem& d : digit_expansions(R, 1, 2 * v2[0] + 1))
                if (!d.is_exact_zero()) cs.push_back(RingElem::one(R) + d);
        }
        for (const RingElem& c : cs) {
            Matrix T = Matrix::identity(R, 1);
            T(0, 0) = c.inverse();
            out.push_back({"rescale(block " + std::to_string(k) + ", " + std::to_string(a) + ", c=" +
                               short_str(c) + ")",
                           recombine(P, {blk.offset + a}, T)});
        }
    }
}

void mix_candidates(const Presentation& P, size_t k, std::vector<Candidate>& out) {
    const PresentedBlock& blk = P.blocks[k];
    GramLattice U = P.unimodular(k);
    const RingConfig& R = U.ring();
    RingElem r = U.det() - RingElem::one(R);
    if (r.is_zero() || !r.val_gt(R.zero_value())) return;
    RingElem sig_inv = RingElem::sigma(R, blk.scale_valuation).inverse();
    for (size_t l = k + 1; l < P.blocks.size(); ++l) {
        const PresentedBlock& other = P.blocks[l];
        std::vector<size_t> idx = iota(other.offset, other.rank());
        GramLattice L = rescale(GramLattice(P.gram.gram().submatrix(idx, idx)), sig_inv);
        for (size_t i = 0; i < U.rank(); ++i)
            for (size_t j = 0; j < L.rank(); ++j) {
                const RingElem& a = U(i, i);
                const RingElem& b = L(j, j);
                if (a.is_zero() || b.is_zero()) continue;
                RingElem q = r / (a * b);
                if (!q.valuation().is_even() || q.valuation() < R.zero_value()) continue;
                if (!is_approximate_square(q)) continue;
                RingElem t = approximate_sqrt(q);
                MixResult res;
                try {
                    res = mix_transform(U, L, i, j, t);
                } catch (const DomainError&) {
                    continue;
                }
                std::vector<size_t> cols = iota(blk.offset, blk.rank());
                cols.insert(cols.end(), idx.begin(), idx.end());
                out.push_back({"mix(block " + std::to_string(k) + " vector " + std::to_string(i) + ", block " +
                                   std::to_string(l) + " vector " + std::to_string(j) + ", t=" + short_str(t) + ")",
                               recombine(P, cols, res.basis)});
            }
    }
}

}  // namespace

size_t PresentedBlock::rank() const {
    size_t n = 0;
    for (size_t s : pieces) n += s;
    return n;
}

bool PresentedBlock::orthogonal() const {
    return std::all_of(pieces.begin(), pieces.end(), [](size_t s) { return s == 1; });
}

GramLattice Presentation::unimodular(size_t k) const {
    const PresentedBlock& b = blocks.at(k);
    std::vector<size_t> idx = iota(b.offset, b.rank());
    GramLattice sub(gram.gram().submatrix(idx, idx));
    return rescale(sub, RingElem::sigma(gram.ring(), b.scale_valuation).inverse());
}

std::string Presentation::to_string() const {
    std::string out;
    for (const PresentedBlock& b : blocks) {
        if (!out.empty()) out += " + ";
        size_t p = b.offset;
        if (b.orthogonal()) {
            out += "diag(";
            for (size_t i = 0; i < b.rank(); ++i)
                out += (i ? ", " : "") + short_str(gram(p + i, p + i));
            out += ")";
            continue;
        }
        for (size_t s : b.pieces) {
            if (p != b.offset) out += " + ";
            if (s == 1) {
                out += "diag(" + short_str(gram(p, p)) + ")";
            } else {
                out += "[[" + short_str(gram(p, p)) + "," + short_str(gram(p, p + 1)) + "],[" +
                       short_str(gram(p + 1, p)) + "," + short_str(gram(p + 1, p + 1)) + "]]";
            }
            p += s;
        }
    }
    return out;
}

Presentation present(const GramLattice& M) {
    JordanDecomposition jd = diagonal_decompose(M);
    Presentation P;
    P.source = M;
    P.basis = jd.transition();
    P.gram = transform_gram(M, P.basis);
    size_t off = 0;
    for (const JordanBlock& b : jd.blocks) {
        P.blocks.push_back({b.scale_valuation, off, b.pieces});
        off += b.rank();
    }
    return P;
}

bool BlockInvariants::operator==(const BlockInvariants& o) const {
    if (scale_valuation != o.scale_valuation || rank != o.rank || diagonalizable != o.diagonalizable ||
        gap != o.gap || norm_level != o.norm_level || small_norms.has_value() != o.small_norms.has_value())
        return false;
    if (!small_norms) return true;
    if (small_norms->size() != o.small_norms->size()) return false;
    for (size_t i = 0; i < small_norms->size(); ++i)
        if (!((*small_norms)[i] == (*o.small_norms)[i])) return false;
    return true;
}

JordanInvariants jordan_invariants(const GramLattice& M) {
    Presentation P = present(M);
    const RingConfig& R = M.ring();
    const ValGroupElem v2 = R.v2();
    const size_t t = P.blocks.size();
    JordanInvariants out;
    for (size_t k = 0; k < t; ++k) {
        const PresentedBlock& b = P.blocks[k];
        GramLattice U = P.unimodular(k);
        BlockInvariants inv;
        inv.scale_valuation = b.scale_valuation;
        inv.rank = b.rank();
        inv.diagonalizable = v2.is_zero();
        for (size_t i = 0; i < U.rank() && !inv.diagonalizable; ++i) inv.diagonalizable = U(i, i).is_unit();
        inv.gap = R.top_value();
        if (k > 0) inv.gap = b.scale_valuation - P.blocks[k - 1].scale_valuation;
        if (k + 1 < t) inv.gap = std::min(inv.gap, P.blocks[k + 1].scale_valuation - b.scale_valuation);
        if (R.discrete()) {
            int64_t w = 2 * v2[0] + 1;
            if (!inv.gap.is_top()) w = std::min(w, inv.gap[0]);
            inv.norm_level = w;
            // Moving a coordinate by pi^e changes the norm by terms of valuation >= min(e + v2, 2e).
            int64_t e = std::max<int64_t>({1, w - v2[0], (w + 1) / 2});
            FiniteQuotient Q(R, w);
            const auto& reps = Q.reps(std::min(e, w));
            const size_t n = U.rank();
            double total = 1;
            for (size_t i = 0; i < n; ++i) total *= static_cast<double>(reps.size());
            if (total <= double(1 << 20)) {
                std::vector<FiniteQuotient::Idx> g(n * n);
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < n; ++j) g[i * n + j] = Q.from_elem(U(i, j));
                std::set<FiniteQuotient::Idx> norms;
                std::vector<size_t> digit(n, 0);
                const FiniteQuotient::Idx zero = Q.from_elem(RingElem::zero(R));
                while (true) {
                    FiniteQuotient::Idx s = zero;
                    for (size_t i = 0; i < n; ++i)
                        for (size_t j = 0; j < n; ++j)
                            s = Q.add(s, Q.mul(Q.mul(reps[digit[i]], g[i * n + j]), reps[digit[j]]));
                    if (Q.val(s) < w) norms.insert(s);
                    size_t c = 0;
                    while (c < n && ++digit[c] == reps.size()) digit[c++] = 0;
                    if (c == n) break;
                }
                inv.small_norms.emplace();
                for (auto s : norms) inv.small_norms->push_back(Q.to_elem(s));
            }
        }
        out.push_back(std::move(inv));
    }
    return out;
}

std::string to_string(CanonicalOrder o) {
    switch (o) {
        case CanonicalOrder::more_canonical: return "more_canonical";
        case CanonicalOrder::less_canonical: return "less_canonical";
        case CanonicalOrder::equal: return "equal";
        case CanonicalOrder::incomparable: return "incomparable";
    }
    return "?";
}

CanonicalOrder canonical_compare(const Presentation& A, const Presentation& B) {
    if (A.blocks.size() != B.blocks.size()) return CanonicalOrder::incomparable;
    for (size_t k = 0; k < A.blocks.size(); ++k)
        if (A.blocks[k].scale_valuation != B.blocks[k].scale_valuation ||
            A.blocks[k].rank() != B.blocks[k].rank())
            return CanonicalOrder::incomparable;
    for (size_t k = 0; k < A.blocks.size(); ++k) {
        CanonicalOrder c = compare_block(A, B, k);
        if (c != CanonicalOrder::equal) return c;
    }
    return CanonicalOrder::equal;
}

Rep1Result rep1_transform(const RingElem& r, const RingElem& s, const RingElem& t) {
    const RingConfig& R = r.ring();
    const RingElem one = RingElem::one(R), two(R, 2);
    if (!t.in_ring()) throw DomainError("rep1: t must lie in the valuation ring");
    if ((t - one).val_gt(R.zero_value())) throw DomainError("rep1: t lies in 1 + I_0");
    RingElem d = (one + t).square();
    RingElem t2 = t.square();
    Rep1Result out;
    out.u = (t2 * (one + s) * (r.square() + two * r) + r - two * t + s * t2) / d;
    out.w = (t2 * (one + r) * (s.square() + two * s) + s - two * t + r * t2) / d;
    RingElem inv = (one + t).inverse();
    out.basis = Matrix(R, 2, 2);
    out.basis(0, 0) = inv;
    out.basis(1, 0) = (one + r) * t * inv;
    out.basis(0, 1) = -((one + s) * t * inv);
    out.basis(1, 1) = inv;
    out.det = (one + (one + r) * (one + s) * t2) / d;
    if (!out.det.is_unit()) throw DomainError("rep1: basis change is not invertible");
    return out;
}

std::optional<RingElem> rep1_optimal_t(const RingElem& r, const RingElem& s) {
    const RingConfig& R = r.ring();
    const ValGroupElem v2 = R.v2();
    if (s.is_zero()) return std::nullopt;
    if (!r.is_zero() && !(r.valuation() + s.valuation() > v2.times(2))) return std::nullopt;
    const RingElem one = RingElem::one(R), two(R, 2);
    RingElem A = (one + r) * (s.square() + two * s) + r;
    RingElem t;
    if (A.is_zero()) {
        t = s / two;
    } else {
        if (!(A.valuation() + s.valuation() > v2.times(2))) return std::nullopt;
        t = solve_quadratic(A, -two, s);
    }
    if (t.is_zero() || !t.val_gt(R.zero_value())) return std::nullopt;
    return t;
}

MixResult mix_transform(const GramLattice& M, const GramLattice& L, size_t i, size_t j, const RingElem& t) {
    const RingConfig& R = M.ring();
    if (!is_unimodular(M)) throw DomainError("mix: first lattice must be unimodular");
    if (L.rank() == 0 || !(lattice_valuation(L) > R.zero_value()))
        throw DomainError("mix: second lattice must have positive valuation");
    if (i >= M.rank() || j >= L.rank()) throw DomainError("mix: index out of range");
    RingElem r = M.det() - RingElem::one(R);
    RingElem d = t.square() * M(i, i) * L(j, j) - r;
    bool ok = d.is_zero() || (!r.is_zero() && d.val_gt(r.valuation()));
    if (!ok) throw DomainError("mix: t^2 ab is not in r + I_{v(r)}");
    const size_t n = M.rank(), m = L.rank();
    Matrix B = Matrix::identity(R, n + m);
    for (size_t c = 0; c < n; ++c) B(n + j, c) = t * M(c, i);
    for (size_t l = 0; l < m; ++l) B(i, n + l) = -(t * L(l, j));
    GramLattice S = transform_gram(direct_sum(M, L), B);
    MixResult out;
    out.basis = B;
    out.N = GramLattice(S.gram().submatrix(iota(0, n), iota(0, n)));
    out.K = GramLattice(S.gram().submatrix(iota(n, m), iota(n, m)));
    return out;
}

CanonicalForm canonicalize(const GramLattice& M) {
    const RingConfig& R = M.ring();
    if (!R.discrete() || R.v2().is_zero()) throw DomainError("canonicalize needs two_adic or ramified2");
    CanonicalForm out;
    Presentation P = present(M);
    // Every accepted step raises some valuation, all bounded by the cap.
    const int64_t max_steps = 8 * static_cast<int64_t>(M.rank()) * (R.precision[0] + 1);
    for (int64_t step = 0; step < max_steps; ++step) {
        std::optional<Candidate> best;
        for (size_t k = 0; k < P.blocks.size() && !best; ++k) {
            std::vector<Candidate> cands;
            rep1_candidates(P, k, cands);
            mix_candidates(P, k, cands);
            rescale_candidates(P, k, cands);
            for (Candidate& c : cands) {
                if (canonical_compare(c.after, P) != CanonicalOrder::more_canonical) continue;
                if (!best || canonical_compare(c.after, best->after) == CanonicalOrder::more_canonical)
                    best = std::move(c);
            }
        }
        if (!best) break;
        P = best->after;
        out.transcript.push_back({best->name, P});
    }
    out.result = P;
    return out;
}

}  // namespace vlat
