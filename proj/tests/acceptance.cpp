// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "lattice_gen.hpp"
#include "vlat/canonical.hpp"
#include "vlat/classify_odd.hpp"
#include "vlat/errors.hpp"
#include "vlat/hensel.hpp"
#include "vlat/io.hpp"
#include "vlat/isometry.hpp"
#include "vlat/jordan.hpp"
#include "vlat/oracle.hpp"
#include "vlat/rank2.hpp"

using namespace vlat;

namespace {

struct Report {
    bool pass = true;
    std::string detail;
};

ValGroupElem step(const RingConfig& R) { return R.discrete() ? ValGroupElem::of(1) : ValGroupElem::of(0, 1); }

bool entries_gt(const Matrix& m, const ValGroupElem& g) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).val_gt(g)) return false;
    return true;
}

Matrix random_matrix(gen::Gen& g, const RingConfig& R, size_t n) {
    Matrix m(R, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(i, j) = g.elem_or_zero(R, 2, 0.3);
    return m;
}

bool is_yes(const OracleResult& r) { return r.status == OracleResult::Status::yes; }

// Oracle answer with invariant prefiltering; lattices are precomputed once.
bool oracle_isometric(const OracleLattice& a, const OracleLattice& b) {
    if (!oracle_invariants_match(a, b)) return false;
    OracleResult r = oracle_isometric_mod(a, b);
    if (r.status == OracleResult::Status::unknown) throw DomainError("oracle search inconclusive");
    return is_yes(r);
}

bool valid_decomposition(const GramLattice& M, const JordanDecomposition& d) {
    const RingConfig& R = M.ring();
    Matrix T = d.transition();
    if (!is_unit_matrix(T)) return false;
    GramLattice C = transform_gram(M, T);
    size_t off = 0;
    for (size_t k = 0; k < d.blocks.size(); ++k) {
        const JordanBlock& b = d.blocks[k];
        if (k > 0 && !(d.blocks[k - 1].scale_valuation < b.scale_valuation)) return false;
        if (!is_unimodular(b.unimodular_gram)) return false;
        RingElem s = RingElem::sigma(R, b.scale_valuation);
        for (size_t i = 0; i < C.rank(); ++i)
            for (size_t j = off; j < off + b.rank(); ++j) {
                bool inside = i >= off && i < off + b.rank();
                if (inside ? !C(i, j).congruent(s * b.unimodular_gram(i - off, j - off)) : !C(i, j).is_zero())
                    return false;
            }
        off += b.rank();
    }
    return off == M.rank();
}

Report criterion1() {
    gen::Gen g(1001);
    int bad = 0, total = 0;
    for (const auto& R : gen::all_backends())
        for (int it = 0; it < 500; ++it) {
            size_t n = static_cast<size_t>(g.range(1, 4));
            GramLattice M = gen::random_lattice(g, R, n);
            if (it % 2 == 0) {
                // Redraw until the determinant is nonzero at the cap.
                do M = gen::random_jordan_lattice(g, R, n);
                while (M.det().is_zero() || !M.det().certified());
            }
            ++total;
            try {
                if (!valid_decomposition(M, jordan_decompose(M))) ++bad;
            } catch (const Error& e) {
                ++bad;
            }
        }
    return {bad == 0, std::to_string(total) + " lattices, " + std::to_string(bad) + " invalid"};
}

Report criterion2() {
    auto R = RingConfig::padic(3);
    const std::vector<long> entries{1, 2, 3, 6, 9, 18};
    std::vector<std::vector<long>> family;
    for (size_t n = 1; n <= 3; ++n) {
        std::vector<size_t> idx(n, 0);
        while (true) {
            std::vector<long> d;
            for (size_t i : idx) d.push_back(entries[i]);
            family.push_back(d);
            size_t c = 0;
            while (c < n && ++idx[c] == entries.size()) idx[c++] = 0;
            if (c == n) break;
        }
    }
    std::vector<GramLattice> lats;
    std::vector<Symbol> syms;
    std::vector<std::unique_ptr<OracleLattice>> ors;
    for (const auto& d : family) {
        lats.push_back(GramLattice::diagonal(R, d));
        syms.push_back(symbol(lats.back()));
        ors.push_back(std::make_unique<OracleLattice>(lats.back(), 4));
    }
    int pairs = 0, disagree = 0;
    for (size_t i = 0; i < lats.size(); ++i)
        for (size_t j = i; j < lats.size(); ++j) {
            if (lats[i].rank() != lats[j].rank()) continue;
            ++pairs;
            if ((syms[i] == syms[j]) != oracle_isometric(*ors[i], *ors[j])) ++disagree;
        }
    return {disagree == 0, std::to_string(lats.size()) + " lattices, " + std::to_string(pairs) + " pairs, " +
                               std::to_string(disagree) + " disagreements"};
}

Report criterion3() {
    gen::Gen g(303);
    int violations = 0, iso = 0;
    for (int it = 0; it < 200; ++it) {
        RingConfig R = it % 2 ? RingConfig::padic(5) : RingConfig::padic(3);
        size_t n = static_cast<size_t>(g.range(1, 2)), m = static_cast<size_t>(g.range(1, 2));
        GramLattice M = gen::random_jordan_lattice(g, R, n);
        GramLattice N = g.coin() ? change_basis(M, gen::random_unit_matrix(g, R, n)) : gen::random_jordan_lattice(g, R, n);
        GramLattice L = gen::random_jordan_lattice(g, R, m);
        bool small = isomorphic_odd(M, N);
        bool big = isomorphic_odd(direct_sum(M, L), direct_sum(N, L));
        iso += small;
        if (small != big) ++violations;
    }
    return {violations == 0,
            "200 triples (" + std::to_string(iso) + " isomorphic), " + std::to_string(violations) + " violations"};
}

Report criterion4() {
    gen::Gen g(404);
    int failures = 0, total = 0;
    std::string where;
    for (const auto& R : gen::all_backends()) {
        for (int it = 0; it < 200; ++it) {
            size_t n = static_cast<size_t>(g.range(1, 4));
            GramLattice M = gen::random_lattice(g, R, n, 2);
            Matrix T = gen::random_unit_matrix(g, R, n);
            GramLattice N = transform_gram(M, T);
            ++total;
            try {
                ValGroupElem lvl = diagonal_decompose(N).last_valuation() + R.v2() + R.v2() + step(R);
                Matrix phi = T + random_matrix(g, R, n).scaled(RingElem::sigma(R, lvl));
                Matrix psi = lift_isometry(M, N, phi);
                if (!(psi.transpose() * M.gram() * psi).congruent(N.gram()) || !entries_gt(psi - phi, R.v2())) {
                    ++failures;
                    where = R.name();
                }
            } catch (const Error& e) {
                ++failures;
                where = R.name() + ": " + e.what();
            }
        }
    }
    return {failures == 0, std::to_string(total) + " instances, " + std::to_string(failures) + " failures" +
                               (where.empty() ? "" : " (last: " + where + ")")};
}

Report criterion5() {
    auto R = RingConfig::two_adic();
    const ValGroupElem v2 = R.v2();
    std::vector<Rank2Form> forms;
    std::vector<std::unique_ptr<OracleLattice>> ors;
    for (long a = 0; a < 16; ++a)
        for (long b = 0; b < 16; ++b) {
            GramLattice L(R, {{a, 1}, {1, b}});
            if (!is_unimodular(L)) continue;
            Rank2Form F = normalize_rank2(L);
            Rank2Form mx = maximal_norm_search(F).form;
            if (!mx.beta.is_zero() && mx.beta.valuation() < v2) continue;
            ArfInvariant arf = generalized_arf(mx);
            if (arf.kind != ArfInvariant::Kind::vanishing && !(arf.valuation > v2)) continue;
            forms.push_back(F);
            ors.push_back(std::make_unique<OracleLattice>(L, 5));
        }
    int pairs = 0, disagree = 0, yes = 0;
    for (size_t i = 0; i < forms.size(); ++i)
        for (size_t j = i; j < forms.size(); ++j) {
            ++pairs;
            bool dec;
            try {
                dec = isomorphic_rank2(forms[i], forms[j]);
            } catch (const Error&) {
                ++disagree;
                continue;
            }
            yes += dec;
            if (dec != oracle_isometric(*ors[i], *ors[j])) ++disagree;
        }
    return {disagree == 0 && pairs > 0, std::to_string(forms.size()) + " forms, " + std::to_string(pairs) +
                                             " pairs (" + std::to_string(yes) + " isomorphic), " +
                                             std::to_string(disagree) + " disagreements"};
}

Report criterion6() {
    gen::Gen g(606);
    int changed = 0, checks = 0, s_fail = 0, s_checks = 0;
    for (auto R : {RingConfig::two_adic(), RingConfig::ramified2()}) {
        int done = 0;
        while (done < 500) {
            RingElem a = g.elem_or_zero(R, 3, 0.1), b = g.elem_or_zero(R, 5, 0.1);
            GramLattice L(Matrix::from_rows(R, std::vector<Vec>{{a, RingElem::one(R)}, {RingElem::one(R), b}}));
            if (!is_unimodular(L)) continue;
            try {
                Rank2Form F = maximal_norm_search(normalize_rank2(L)).form;
                GramLattice L2 = change_basis(L, gen::random_unit_matrix(g, R, 2));
                Rank2Form G = maximal_norm_search(normalize_rank2(L2)).form;
                ArfInvariant x = generalized_arf(F), y = generalized_arf(G);
                bool same = same_generalized_arf(x, y);
                if (x.fine_class.has_value() != y.fine_class.has_value()) same = false;
                if (same && x.fine_class) same = same_fine_arf(x, y);
                if (!same) ++changed;
            } catch (const Error&) {
                ++changed;
            }
            ++checks;
            ++done;
        }
        int64_t lo = R.v2()[0] / 2 + 1;
        for (int it = 0; it < 1000; ++it) {
            RingElem t = g.elem_or_zero(R, 4) * RingElem::sigma(R, ValGroupElem::of(lo));
            RingElem s = g.elem_or_zero(R, 4) * RingElem::sigma(R, ValGroupElem::of(lo));
            RingElem two(R, 2), one = RingElem::one(R);
            RingElem d1 = two * t + t * t, d2 = two * s + s * s;
            // (1 + d1)(1 + d2) and (1 + d1)^{-1} stay in 1 + S.
            bool ok = in_S(d1) && in_S(d2) && in_S(d1 + d2 + d1 * d2) && in_S((one + d1).inverse() - one);
            ++s_checks;
            if (!ok) ++s_fail;
        }
    }
    return {changed == 0 && s_fail == 0, std::to_string(checks) + " basis changes (" + std::to_string(changed) +
                                             " changed a class), " + std::to_string(s_checks) + " S pairs (" +
                                             std::to_string(s_fail) + " failures)"};
}

Report criterion7() {
    std::vector<GramLattice> inputs;
    for (const auto& e : std::filesystem::directory_iterator(VLAT_FIXTURE_DIR)) {
        GramLattice M = load_lattice(e.path().string());
        if (M.ring().kind == RingKind::two_adic || M.ring().kind == RingKind::ramified2) inputs.push_back(M);
    }
    size_t fixtures = inputs.size();
    gen::Gen g(707);
    for (auto R : {RingConfig::two_adic(), RingConfig::ramified2()})
        for (int it = 0; it < 20; ++it)
            inputs.push_back(gen::random_jordan_lattice(g, R, static_cast<size_t>(g.range(1, 3)), 2));
    int steps = 0, bad = 0, not_idem = 0;
    std::string where;
    for (size_t i = 0; i < inputs.size(); ++i) {
        const GramLattice& M = inputs[i];
        try {
            CanonicalForm F = canonicalize(M);
            Presentation prev = present(M);
            for (const CanonicalStep& s : F.transcript) {
                ++steps;
                bool ok = is_unit_matrix(s.after.basis) &&
                          change_basis(M, s.after.basis).gram().congruent(s.after.gram.gram()) &&
                          canonical_compare(s.after, prev) == CanonicalOrder::more_canonical &&
                          is_yes(oracle_isometric_mod(M, s.after.gram, 5));
                if (!ok) {
                    ++bad;
                    where = M.to_string() + " at " + s.transform;
                }
                prev = s.after;
            }
            CanonicalForm again = canonicalize(F.result.gram);
            if (!again.transcript.empty() || canonical_compare(again.result, F.result) != CanonicalOrder::equal)
                ++not_idem;
        } catch (const Error& e) {
            ++bad;
            where = M.to_string() + ": " + e.what();
        }
    }
    return {bad == 0 && not_idem == 0 && steps > 0,
            std::to_string(inputs.size()) + " inputs (" + std::to_string(fixtures) + " fixtures), " +
                std::to_string(steps) + " steps, " + std::to_string(bad) + " unsound, " + std::to_string(not_idem) +
                " not idempotent" + (where.empty() ? "" : " (last: " + where + ")")};
}

Report criterion8() {
    gen::Gen g(808);
    int bad = 0, total = 0;
    std::string where;
    for (const auto& R : gen::all_backends()) {
        const ValGroupElem v2 = R.v2();
        const RingElem one = RingElem::one(R);
        for (int it = 0; it < 1000; ++it) {
            ++total;
            try {
                ValGroupElem vy = v2.times(2) + step(R) + g.value(R, 4);
                RingElem y = g.elem_with_value(R, vy);
                RingElem z = sqrt_one_plus(y);
                if (!((one + z).square() - (one + y)).is_zero() || !(z.valuation() == y.valuation() - v2)) {
                    ++bad;
                    where = R.name() + " sqrt_one_plus " + y.to_string();
                }
            } catch (const Error& e) {
                ++bad;
                where = R.name() + " sqrt_one_plus: " + e.what();
            }
        }
        for (int it = 0; it < 1000; ++it) {
            ++total;
            try {
                ValGroupElem vb = g.value(R, 2), va = g.value(R, 2);
                ValGroupElem vc = vb.times(2) - va + step(R) + g.value(R, 2);
                if (vc < R.zero_value()) vc = R.zero_value();
                RingElem A = g.elem_with_value(R, va), B = g.elem_with_value(R, vb), C = g.elem_with_value(R, vc);
                RingElem t = solve_quadratic(A, B, C);
                if (!(A * t.square() + B * t + C).is_zero() || !(t.valuation() == C.valuation() - B.valuation())) {
                    ++bad;
                    where = R.name() + " solve_quadratic";
                }
            } catch (const Error& e) {
                ++bad;
                where = R.name() + " solve_quadratic: " + e.what();
            }
        }
    }
    return {bad == 0, std::to_string(total) + " instances, " + std::to_string(bad) + " failures" +
                          (where.empty() ? "" : " (last: " + where + ")")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Report()>>> criteria{
        {"jordan validity", criterion1},          {"odd classification vs oracle", criterion2},
        {"witt cancellation", criterion3},        {"isometry lifting", criterion4},
        {"rank 2 decision vs oracle", criterion5}, {"arf invariance and S closure", criterion6},
        {"canonicalization soundness", criterion7}, {"hensel kernel", criterion8},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Report r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("aborted: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %zu %s: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failed += !r.pass;
    }
    return failed ? 1 : 0;
}
