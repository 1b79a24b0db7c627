#include "vlat/oracle.hpp"

#include <memory>
#include <random>

#include "dvr.hpp"
#include "laurent.hpp"
#include "vlat/errors.hpp"
#include "vlat/isometry.hpp"
#include "vlat/jordan.hpp"

namespace vlat {

using Idx = FiniteQuotient::Idx;

// ------------------------------------------------------------ FiniteQuotient

FiniteQuotient::FiniteQuotient(const RingConfig& ring, int64_t k) : ring_(ring), k_(k) {
    if (k < 1) throw DomainError("quotient level must be positive");
    uint64_t p = ring.residue_char();
    uint64_t m = 1;
    for (int64_t i = 0; i < k; ++i) {
        m *= p;
        if (m > 4096) throw DomainError("quotient ring R/I_" + std::to_string(k) + " is too large for tables");
    }
    m_ = static_cast<Idx>(m);

    // Element <-> digit vector (d_0, ..., d_{k-1}) meaning sum d_i pi^i (u^i for laurent2).
    // Arithmetic goes through integer / polynomial representatives.
    std::vector<std::vector<uint32_t>> digits(m_);
    for (Idx a = 0; a < m_; ++a) {
        Idx x = a;
        digits[a].resize(static_cast<size_t>(k));
        for (int64_t i = 0; i < k; ++i) {
            digits[a][static_cast<size_t>(i)] = x % p;
            x /= static_cast<Idx>(p);
        }
    }
    auto encode = [&](const std::vector<uint32_t>& d) {
        Idx x = 0;
        for (int64_t i = k - 1; i >= 0; --i) x = x * static_cast<Idx>(p) + d[static_cast<size_t>(i)];
        return x;
    };
    // Normal form of an integer pair a + b*pi (ramified) or integer a (unramified)
    // as pi-adic digits; for laurent2 plain polynomial truncation.
    auto digits_of_pair = [&](mpz_class a, mpz_class b) {
        std::vector<uint32_t> d(static_cast<size_t>(k), 0);
        for (int64_t i = 0; i < k; ++i) {
            // digit = (a mod 2) for ramified (pi-adic expansion), a mod p otherwise
            uint32_t di = static_cast<uint32_t>(mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(p)));
            d[static_cast<size_t>(i)] = di;
            a -= di;
            if (ring.kind == RingKind::ramified2) {
                // (a + b pi) / pi = b + (a/2) pi
                mpz_class na = b;
                mpz_divexact_ui(b.get_mpz_t(), a.get_mpz_t(), 2);
                a = na;
            } else {
                mpz_divexact_ui(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
            }
        }
        return d;
    };
    // value of digits as an integer pair
    std::vector<std::pair<mpz_class, mpz_class>> pair_of(m_);
    if (ring.discrete()) {
        for (Idx a = 0; a < m_; ++a) {
            mpz_class A = 0, B = 0, PA = 1, PB = 0;  // running pi^i = PA + PB*pi
            for (int64_t i = 0; i < k; ++i) {
                uint32_t di = digits[a][static_cast<size_t>(i)];
                A += PA * di;
                B += PB * di;
                if (ring.kind == RingKind::ramified2) {
                    mpz_class na = 2 * PB;
                    PB = PA;
                    PA = na;
                } else {
                    PA *= static_cast<unsigned long>(p);
                }
            }
            pair_of[a] = {A, B};
        }
    }
    add_.resize(size_t(m_) * m_);
    mul_.resize(size_t(m_) * m_);
    neg_.resize(m_);
    for (Idx a = 0; a < m_; ++a)
        for (Idx b = 0; b < m_; ++b) {
            if (ring.discrete()) {
                auto [A1, B1] = pair_of[a];
                auto [A2, B2] = pair_of[b];
                add_[a * m_ + b] = encode(digits_of_pair(A1 + A2, B1 + B2));
                mpz_class pa = A1 * A2, pb = 0;
                if (ring.kind == RingKind::ramified2) {
                    pa += 2 * B1 * B2;
                    pb = A1 * B2 + A2 * B1;
                }
                mul_[a * m_ + b] = encode(digits_of_pair(pa, pb));
            } else {
                std::vector<uint32_t> s(static_cast<size_t>(k), 0), t(static_cast<size_t>(k), 0);
                for (int64_t i = 0; i < k; ++i) s[i] = (digits[a][i] + digits[b][i]) % p;
                for (int64_t i = 0; i < k; ++i)
                    for (int64_t j = 0; i + j < k; ++j)
                        t[i + j] = static_cast<uint32_t>((t[i + j] + uint64_t(digits[a][i]) * digits[b][j]) % p);
                add_[a * m_ + b] = encode(s);
                mul_[a * m_ + b] = encode(t);
            }
        }
    for (Idx a = 0; a < m_; ++a)
        for (Idx b = 0; b < m_; ++b)
            if (add(a, b) == 0) neg_[a] = b;
    val_.resize(m_);
    res_.resize(m_);
    for (Idx a = 0; a < m_; ++a) {
        int64_t v = k;
        for (int64_t i = 0; i < k; ++i)
            if (digits[a][i]) {
                v = i;
                break;
            }
        val_[a] = v;
        res_[a] = digits[a][0];
    }
    reps_.resize(static_cast<size_t>(k + 1));
    for (int64_t e = 0; e <= k; ++e)
        for (Idx a = 0; a < m_; ++a) {
            bool ok = true;
            for (int64_t i = e; i < k; ++i) ok &= digits[a][i] == 0;
            if (ok) reps_[static_cast<size_t>(e)].push_back(a);
        }
}

Idx FiniteQuotient::from_elem(const RingElem& x) const {
    if (!(x.ring() == ring_)) throw ConfigError("element from a different ring");
    if (x.is_exact_zero()) return 0;
    ValGroupElem kt = x.known_to();
    ValGroupElem need = ring_.discrete() ? ValGroupElem::of(k_) : ValGroupElem::of(0, k_);
    if (kt < need) throw DomainError("quotient level exceeds element precision");
    if (!x.in_ring()) throw DomainError("element outside the valuation ring");
    uint64_t p = ring_.residue_char();
    std::vector<uint32_t> d(static_cast<size_t>(k_), 0);
    if (ring_.discrete()) {
        detail::DvrCtx c{ring_.kind == RingKind::ramified2, static_cast<uint32_t>(p), ring_.precision[0]};
        mpz_class a, b;
        detail::dvr_digits(c, *x.dvr(), a, b);
        for (int64_t i = 0; i < k_; ++i) {
            uint32_t di = static_cast<uint32_t>(mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(p)));
            d[static_cast<size_t>(i)] = di;
            a -= di;
            if (ring_.kind == RingKind::ramified2) {
                mpz_class na = b;
                mpz_divexact_ui(b.get_mpz_t(), a.get_mpz_t(), 2);
                a = na;
            } else {
                mpz_divexact_ui(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
            }
        }
    } else {
        detail::LaurentCtx c{ring_.p, ring_.precision[0], ring_.precision[1]};
        d = detail::lv_low_digits(c, *x.laurent(), k_);
    }
    Idx r = 0;
    for (int64_t i = k_ - 1; i >= 0; --i) r = r * static_cast<Idx>(p) + d[static_cast<size_t>(i)];
    return r;
}

RingElem FiniteQuotient::to_elem(Idx a) const {
    if (a == 0) return RingElem::zero(ring_);
    uint64_t p = ring_.residue_char();
    RingElem acc = RingElem::zero(ring_);
    RingElem::Terms terms;
    for (int64_t i = 0; i < k_; ++i) {
        uint32_t di = a % p;
        a /= static_cast<Idx>(p);
        if (!di) continue;
        if (ring_.discrete())
            acc += RingElem(ring_, di) * RingElem::sigma(ring_, ValGroupElem::of(i));
        else
            terms[0][i] = di;
    }
    return ring_.discrete() ? acc : RingElem::laurent(ring_, terms);
}

// ------------------------------------------------------------ OracleLattice

namespace {

// Odometer over the product of per-coordinate representative lists.
template <class F>
void for_each_vector(const FiniteQuotient& Q, const std::vector<int64_t>& e, F&& f) {
    size_t n = e.size();
    std::vector<const std::vector<Idx>*> lists(n);
    for (size_t i = 0; i < n; ++i) lists[i] = &Q.reps(e[i]);
    std::vector<size_t> pos(n, 0);
    std::vector<Idx> c(n);
    for (size_t i = 0; i < n; ++i) c[i] = (*lists[i])[0];
    for (;;) {
        f(c);
        size_t i = 0;
        for (; i < n; ++i) {
            if (++pos[i] < lists[i]->size()) {
                c[i] = (*lists[i])[pos[i]];
                break;
            }
            pos[i] = 0;
            c[i] = (*lists[i])[0];
        }
        if (i == n) return;
    }
}

Idx qform(const FiniteQuotient& Q, const std::vector<Idx>& g, size_t n, const std::vector<Idx>& c) {
    Idx s = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!c[i]) continue;
        Idx row = Q.mul(g[i * n + i], c[i]);
        Idx two_off = 0;
        for (size_t j = i + 1; j < n; ++j)
            if (c[j]) two_off = Q.add(two_off, Q.mul(g[i * n + j], c[j]));
        row = Q.add(row, Q.add(two_off, two_off));
        s = Q.add(s, Q.mul(c[i], row));
    }
    return s;
}

Idx qdet(const FiniteQuotient& Q, const std::vector<Idx>& g, size_t n) {
    // Leibniz expansion; n is small.
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    Idx s = 0;
    do {
        Idx term = Q.from_elem(RingElem::one(Q.ring()));
        size_t inv = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        for (size_t i = 0; i < n; ++i) term = Q.mul(term, g[i * n + perm[i]]);
        s = Q.add(s, inv % 2 ? Q.neg(term) : term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return s;
}

}  // namespace

OracleLattice::OracleLattice(const GramLattice& M, int64_t k)
    : M_(M), q_(std::make_shared<FiniteQuotient>(M.ring(), k)), n_(M.rank()) {
    const FiniteQuotient& Q = *q_;
    g_.resize(n_ * n_);
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j) g_[i * n_ + j] = Q.from_elem(M(i, j));
    e_.resize(n_);
    for (size_t i = 0; i < n_; ++i) {
        int64_t v = k;
        for (size_t j = 0; j < n_; ++j) v = std::min(v, Q.val(g_[i * n_ + j]));
        e_[i] = std::max<int64_t>(1, k - v);
        weight_log_ += k - e_[i];
        count_ *= Q.reps(e_[i]).size();
    }
    det_ = n_ ? qdet(Q, g_, n_) : Q.from_elem(RingElem::one(M.ring()));
    if (count_ > kOracleVectorLimit) return;
    uint64_t w = 1;
    for (int64_t i = 0; i < weight_log_; ++i) w *= M.ring().residue_char();
    std::map<std::pair<Idx, bool>, uint64_t> fp;
    for_each_vector(Q, e_, [&](const std::vector<Idx>& c) {
        bool prim = false;
        for (Idx x : c) prim |= Q.is_unit(x);
        ++fp[{qform(Q, g_, n_, c), prim}];
    });
    for (auto& [key, cnt] : fp) fp_[key] = cnt * w;
}

bool oracle_invariants_match(const OracleLattice& M, const OracleLattice& N) {
    const FiniteQuotient& Q = M.quotient();
    if (!(M.lattice().ring() == N.lattice().ring()) || Q.level() != N.quotient().level())
        throw ConfigError("oracle lattices over different quotients");
    if (M.rank() != N.rank()) return false;
    // det N = u^2 det M for a unit u
    bool det_ok = false;
    for (Idx u = 0; u < Q.size() && !det_ok; ++u)
        if (Q.is_unit(u) && Q.mul(Q.mul(u, u), M.det()) == N.det()) det_ok = true;
    if (!det_ok) return false;
    if (M.vector_count() <= kOracleVectorLimit && N.vector_count() <= kOracleVectorLimit)
        return M.fingerprint() == N.fingerprint();
    return true;
}

// ------------------------------------------------------------ search

class OracleSearch {
public:
    OracleSearch(const OracleLattice& M, const OracleLattice& N) : M_(M), N_(N), Q_(M.quotient()), n_(M.rank()) {}

    bool run(OracleResult& out) {
        // Primitive vectors of M bucketed by the target norms.
        std::map<Idx, size_t> want;
        for (size_t j = 0; j < n_; ++j) want.emplace(N_.gram(j, j), 0);
        buckets_.assign(want.size(), {});
        size_t b = 0;
        for (auto& [norm, slot] : want) slot = b++;
        for_each_vector(Q_, M_.e_, [&](const std::vector<Idx>& c) {
            bool prim = false;
            for (Idx x : c) prim |= Q_.is_unit(x);
            if (!prim) return;
            auto it = want.find(qform(Q_, M_.g_, n_, c));
            if (it == want.end()) return;
            auto& bk = buckets_[it->second];
            bk.insert(bk.end(), c.begin(), c.end());
        });
        for (size_t j = 0; j < n_; ++j) slot_.push_back(want.at(N_.gram(j, j)));
        cols_.assign(n_, std::vector<Idx>(n_));
        rows_.assign(n_, std::vector<Idx>(n_));
        bool ok = extend(0);
        out.nodes = nodes_;
        if (ok) {
            Matrix T(M_.lattice().ring(), n_, n_);
            for (size_t j = 0; j < n_; ++j)
                for (size_t i = 0; i < n_; ++i) T(i, j) = Q_.to_elem(cols_[j][i]);
            out.witness = T;
        }
        return ok;
    }

private:
    bool independent(size_t j) {
        // Residues of columns 0..j are linearly independent over F_p.
        uint32_t p = M_.lattice().ring().residue_char();
        std::vector<std::vector<uint32_t>> a(j + 1, std::vector<uint32_t>(n_));
        for (size_t c = 0; c <= j; ++c)
            for (size_t i = 0; i < n_; ++i) a[c][i] = Q_.residue(cols_[c][i]);
        size_t rank = 0;
        for (size_t col = 0; col < n_ && rank <= j; ++col) {
            size_t piv = rank;
            while (piv <= j && a[piv][col] == 0) ++piv;
            if (piv > j) continue;
            std::swap(a[piv], a[rank]);
            uint32_t inv = 1;
            for (uint32_t t = 1; t < p; ++t)
                if (t * a[rank][col] % p == 1) inv = t;
            for (size_t r = 0; r <= j; ++r) {
                if (r == rank || a[r][col] == 0) continue;
                uint32_t f = a[r][col] * inv % p;
                for (size_t i = 0; i < n_; ++i) a[r][i] = (a[r][i] + p * p - f * a[rank][i] % p) % p;
            }
            ++rank;
        }
        return rank == j + 1;
    }

    bool extend(size_t j) {
        if (j == n_) return true;
        const auto& bk = buckets_[slot_[j]];
        for (size_t off = 0; off < bk.size(); off += n_) {
            ++nodes_;
            const Idx* c = &bk[off];
            bool ok = true;
            for (size_t i = 0; i < j && ok; ++i) {
                Idx s = 0;
                for (size_t a = 0; a < n_; ++a)
                    if (c[a]) s = Q_.add(s, Q_.mul(rows_[i][a], c[a]));
                ok = s == N_.gram(i, j);
            }
            if (!ok) continue;
            for (size_t a = 0; a < n_; ++a) cols_[j][a] = c[a];
            if (!independent(j)) continue;
            for (size_t a = 0; a < n_; ++a) {
                Idx s = 0;
                for (size_t b = 0; b < n_; ++b)
                    if (c[b]) s = Q_.add(s, Q_.mul(M_.gram(a, b), c[b]));
                rows_[j][a] = s;
            }
            if (extend(j + 1)) return true;
        }
        return false;
    }

    const OracleLattice& M_;
    const OracleLattice& N_;
    const FiniteQuotient& Q_;
    size_t n_;
    std::vector<std::vector<Idx>> buckets_;
    std::vector<size_t> slot_;
    std::vector<std::vector<Idx>> cols_, rows_;
    uint64_t nodes_ = 0;
};

OracleResult oracle_isometric_mod(const OracleLattice& M, const OracleLattice& N) {
    OracleResult r;
    if (!oracle_invariants_match(M, N)) {
        r.status = OracleResult::Status::no;
        return r;
    }
    if (M.rank() == 0) {
        r.status = OracleResult::Status::yes;
        r.witness = Matrix(M.lattice().ring(), 0, 0);
        return r;
    }
    if (M.vector_count() > kOracleVectorLimit) {
        r.status = OracleResult::Status::unknown;
        return r;
    }
    OracleSearch s(M, N);
    r.status = s.run(r) ? OracleResult::Status::yes : OracleResult::Status::no;
    return r;
}

OracleResult oracle_isometric_mod(const GramLattice& M, const GramLattice& N, int64_t k) {
    if (!(M.ring() == N.ring())) throw ConfigError("lattices over different rings");
    OracleLattice a(M, k), b(N, k);
    if (M.rank() > 0 && a.vector_count() > kOracleVectorLimit)
        throw DomainError("exhaustive search too large; use oracle_isometric_random");
    OracleResult r = oracle_isometric_mod(a, b);
    if (r.witness && M.ring().discrete() && M.rank() > 0) {
        // A witness modulo pi^k with k > v(N_t) + 2v(2) lifts to an exact isometry.
        ValGroupElem need = diagonal_decompose(N).last_valuation() + M.ring().v2() + M.ring().v2();
        if (need < ValGroupElem::of(k)) r.certified = lift_isometry(M, N, *r.witness);
    }
    return r;
}

OracleResult oracle_isometric_random(const GramLattice& M, const GramLattice& N, int64_t k, uint64_t trials,
                                     uint64_t seed) {
    if (!(M.ring() == N.ring())) throw ConfigError("lattices over different rings");
    OracleResult r;
    if (M.rank() != N.rank()) {
        r.status = OracleResult::Status::no;
        return r;
    }
    FiniteQuotient Q(M.ring(), k);
    size_t n = M.rank();
    std::vector<Idx> gm(n * n), gn(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            gm[i * n + j] = Q.from_elem(M(i, j));
            gn[i * n + j] = Q.from_elem(N(i, j));
        }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Idx> pick(0, Q.size() - 1);
    std::vector<std::vector<Idx>> cols(n, std::vector<Idx>(n));
    auto pair = [&](const std::vector<Idx>& x, const std::vector<Idx>& y) {
        Idx s = 0;
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) s = Q.add(s, Q.mul(x[a], Q.mul(gm[a * n + b], y[b])));
        return s;
    };
    for (uint64_t t = 0; t < trials; ++t) {
        size_t j = 0;
        for (; j < n; ++j) {
            bool found = false;
            for (int attempt = 0; attempt < 2000 && !found; ++attempt) {
                ++r.nodes;
                for (auto& x : cols[j]) x = pick(rng);
                bool ok = pair(cols[j], cols[j]) == gn[j * n + j];
                for (size_t i = 0; i < j && ok; ++i) ok = pair(cols[i], cols[j]) == gn[i * n + j];
                found = ok;
            }
            if (!found) break;
        }
        if (j < n) continue;
        Matrix T(M.ring(), n, n);
        for (size_t c = 0; c < n; ++c)
            for (size_t i = 0; i < n; ++i) T(i, c) = Q.to_elem(cols[c][i]);
        RingElem d = determinant(T);
        if (d.is_zero() || !d.is_unit()) continue;
        r.status = OracleResult::Status::yes;
        r.witness = T;
        return r;
    }
    r.status = OracleResult::Status::unknown;
    return r;
}

std::vector<RingElem> oracle_norm_set(const GramLattice& M, int64_t k) {
    OracleLattice L(M, k);
    if (L.vector_count() > kOracleVectorLimit) throw DomainError("norm set enumeration too large");
    std::vector<RingElem> out;
    std::vector<bool> seen(L.quotient().size(), false);
    for (const auto& [key, cnt] : L.fingerprint())
        if (key.second && cnt && !seen[key.first]) {
            seen[key.first] = true;
            out.push_back(L.quotient().to_elem(key.first));
        }
    return out;
}

}  // namespace vlat
