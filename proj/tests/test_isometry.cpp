#include "doctest.h"
#include "lattice_gen.hpp"
#include "vlat/errors.hpp"
#include "vlat/isometry.hpp"
#include "vlat/jordan.hpp"

using namespace vlat;

namespace {

Vec vec(const RingConfig& R, std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.push_back(x ? RingElem(R, x) : RingElem::zero(R));
    return v;
}

bool entries_gt(const Matrix& m, const ValGroupElem& g) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).val_gt(g)) return false;
    return true;
}

// Product of reflections fixing random minimal-norm vectors: a random isometry of M.
Matrix random_isometry(gen::Gen& g, const GramLattice& M, int count) {
    const RingConfig& R = M.ring();
    size_t n = M.rank();
    ValGroupElem v = lattice_valuation(M);
    Matrix f = Matrix::identity(R, n);
    for (int k = 0; k < count; ++k) {
        Vec z(n);
        for (auto& e : z) e = g.elem_or_zero(R, 1, 0.3);
        RingElem zz = dot(z, M.gram() * z);
        if (zz.is_zero() || !(zz.valuation() == v)) continue;
        f = reflection_taking(M, z, z) * f;
    }
    return f;
}

Matrix random_matrix(gen::Gen& g, const RingConfig& R, size_t n) {
    Matrix E(R, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) E(i, j) = g.elem_or_zero(R, 2, 0.3);
    return E;
}

ValGroupElem step(const RingConfig& R) { return R.discrete() ? ValGroupElem::of(1) : ValGroupElem::of(0, 1); }

}  // namespace

TEST_CASE("reflection examples") {
    auto R3 = RingConfig::padic(3);
    auto I2 = GramLattice::diagonal(R3, {1, 1});
    Matrix r = reflection_taking(I2, vec(R3, {1, 0}), vec(R3, {0, 1}));
    CHECK(r.congruent(Matrix::from_rows(R3, {{0, 1}, {1, 0}})));

    Matrix s = reflection_taking(I2, vec(R3, {1, 0}), vec(R3, {1, 0}));
    CHECK(s.congruent(Matrix::from_rows(R3, {{1, 0}, {0, -1}})));

    auto R5 = RingConfig::padic(5);
    auto I25 = GramLattice::diagonal(R5, {1, 1});
    // (3/5, 4/5) is not integral; (0, 1) has the same norm as e1.
    Matrix t = reflection_taking(I25, vec(R5, {1, 0}), vec(R5, {0, 1}));
    CHECK((t * t).congruent(Matrix::identity(R5, 2)));
    CHECK((t.transpose() * I25.gram() * t).congruent(I25.gram()));

    CHECK_THROWS_AS(reflection_taking(I2, vec(R3, {1, 0}), vec(R3, {1, 1})), DomainError);
    CHECK_THROWS_AS(reflection_taking(GramLattice::diagonal(R3, {1, 3}), vec(R3, {0, 1}), vec(R3, {0, 1})),
                    DomainError);
    auto R2 = RingConfig::two_adic();
    CHECK_THROWS_AS(reflection_taking(GramLattice::diagonal(R2, {1}), vec(R2, {1}), vec(R2, {1})), DomainError);
}

TEST_CASE("reflections are involutive isometries") {
    gen::Gen g(31);
    for (auto R : {RingConfig::padic(3), RingConfig::padic(5), RingConfig::laurent2(3)}) {
        for (int it = 0; it < 40; ++it) {
            size_t n = static_cast<size_t>(g.range(1, 3));
            auto M = gen::random_lattice(g, R, n, 2);
            Vec x = diagonal_decompose(M).transition().col(0);
            Vec y = random_isometry(g, M, 6) * x;
            Matrix r = reflection_taking(M, x, y);
            CHECK((r * r).congruent(Matrix::identity(R, n)));
            CHECK((r.transpose() * M.gram() * r).congruent(M.gram()));
            Vec rx = r * x;
            for (size_t i = 0; i < n; ++i) CHECK(rx[i].congruent(y[i]));
        }
    }
}

TEST_CASE("automorphism factorization") {
    auto R3 = RingConfig::padic(3);
    auto I2 = GramLattice::diagonal(R3, {1, 1});
    CHECK(decompose_automorphism(I2, Matrix::identity(R3, 2)).empty());
    auto one = decompose_automorphism(I2, Matrix::from_rows(R3, {{0, 1}, {1, 0}}));
    CHECK(one.size() == 1);
    CHECK_THROWS_AS(decompose_automorphism(I2, Matrix::from_rows(R3, {{1, 1}, {0, 1}})), DomainError);

    gen::Gen g(8);
    int nontrivial = 0;
    for (auto R : {RingConfig::padic(3), RingConfig::padic(5)}) {
        for (int it = 0; it < 30; ++it) {
            auto M = it % 3 == 0 ? GramLattice::diagonal(R, {1, 1, 2}) : gen::random_lattice(g, R, 3, 2);
            Matrix f = random_isometry(g, M, 3);
            REQUIRE((f.transpose() * M.gram() * f).congruent(M.gram()));
            auto rs = decompose_automorphism(M, f);
            CHECK(rs.size() <= 3);
            nontrivial += rs.size() >= 2;
            Matrix prod = Matrix::identity(R, 3);
            for (const auto& r : rs) prod = prod * r;
            CHECK(prod.congruent(f));
        }
    }
    CHECK(nontrivial > 10);
}

TEST_CASE("lift examples") {
    auto R3 = RingConfig::padic(3);
    auto I2 = GramLattice::diagonal(R3, {1, 1});
    CHECK(lift_isometry(I2, I2, Matrix::identity(R3, 2)).congruent(Matrix::identity(R3, 2)));
    Matrix phi = Matrix::from_rows(R3, {{1, 3}, {0, 1}});
    Matrix psi = lift_isometry(I2, I2, phi);
    CHECK((psi.transpose() * I2.gram() * psi).congruent(I2.gram()));
    CHECK(entries_gt(psi - phi, ValGroupElem::of(0)));

    auto R2 = RingConfig::two_adic();
    GramLattice M(R2, {{2, 1}, {1, 2}});
    Matrix T = Matrix::from_rows(R2, {{1, 2}, {3, 1}});
    GramLattice N = transform_gram(M, T);
    Matrix phi2 = T + Matrix::from_rows(R2, {{8, 0}, {8, 16}});
    Matrix psi2 = lift_isometry(M, N, phi2);
    CHECK((psi2.transpose() * M.gram() * psi2).congruent(N.gram()));
    CHECK(entries_gt(psi2 - phi2, ValGroupElem::of(1)));

    CHECK_THROWS_AS(lift_isometry(I2, GramLattice::diagonal(R3, {1, 2}), Matrix::identity(R3, 2)),
                    NotApproximatelyIsometric);
    CHECK_THROWS_AS(lift_isometry(M, N, T + Matrix::from_rows(R2, {{2, 0}, {0, 0}})), NotApproximatelyIsometric);
}

TEST_CASE("lift perturbed isometries on every backend") {
    gen::Gen g(77);
    for (auto R : gen::all_backends()) {
        int skipped = 0;
        for (int it = 0; it < 40; ++it) {
            size_t n = static_cast<size_t>(g.range(1, 4));
            auto M = gen::random_lattice(g, R, n, 2);
            Matrix T = gen::random_unit_matrix(g, R, n);
            GramLattice N = transform_gram(M, T);
            CAPTURE(R.name());
            CAPTURE(M.to_string());
            try {
                ValGroupElem lvl = diagonal_decompose(N).last_valuation() + R.v2() + R.v2() + step(R);
                Matrix phi = T + random_matrix(g, R, n).scaled(RingElem::sigma(R, lvl));
                Matrix psi = lift_isometry(M, N, phi);
                CHECK((psi.transpose() * M.gram() * psi).congruent(N.gram()));
                CHECK(entries_gt(psi - phi, R.v2()));
            } catch (const IndeterminateValuation&) {
                ++skipped;
            }
        }
        CHECK(skipped < 4);
    }
}
