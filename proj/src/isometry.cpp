#include "vlat/isometry.hpp"

#include "vlat/errors.hpp"
#include "vlat/hensel.hpp"
#include "vlat/jordan.hpp"

namespace vlat {

namespace {

RingElem pair(const Matrix& G, const Vec& a, const Vec& b) { return dot(a, G * b); }

void require_odd(const RingConfig& R, const char* what) {
    if (!R.v2().is_zero()) throw DomainError(std::string(what) + " needs 2 to be invertible");
}

// M columns j of F as vectors.
Vec column(const Matrix& F, size_t j) { return F.col(j); }

Vec axpy(const Vec& y, const RingElem& a, const Vec& x) {
    Vec r = y;
    for (size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
    return r;
}

Vec scaled(const RingElem& a, const Vec& x) {
    Vec r = x;
    for (auto& e : r) e = a * e;
    return r;
}

}  // namespace

Matrix reflection_taking(const GramLattice& M, const Vec& x, const Vec& y) {
    const RingConfig& R = M.ring();
    require_odd(R, "reflection_taking");
    size_t n = M.rank();
    if (x.size() != n || y.size() != n) throw DomainError("vector length does not match the rank");
    const Matrix& G = M.gram();
    RingElem xx = pair(G, x, x);
    if (!xx.congruent(pair(G, y, y))) throw DomainError("reflection_taking: vectors have different norms");
    if (xx.is_zero() || xx.valuation() != lattice_valuation(M))
        throw DomainError("reflection_taking: norm is not of minimal valuation");
    RingElem half = RingElem(R, 2).inverse();
    Vec u(n), w(n);
    for (size_t i = 0; i < n; ++i) {
        u[i] = (x[i] + y[i]) * half;
        w[i] = (x[i] - y[i]) * half;
    }
    RingElem uu = pair(G, u, u);
    bool use_u = !uu.is_zero() && uu.valuation() == xx.valuation();
    const Vec& a = use_u ? u : w;
    RingElem scale = RingElem(R, 2) / (use_u ? uu : pair(G, w, w));
    // use_u:  z -> -z + 2 (z,u)/u^2 u;  otherwise z -> z - 2 (z,w)/w^2 w
    Vec Ga = G.transpose() * a;
    Matrix r = Matrix::identity(R, n);
    if (use_u) r = r.scaled(RingElem(R, -1));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            RingElem t = scale * a[i] * Ga[j];
            r(i, j) = use_u ? r(i, j) + t : r(i, j) - t;
        }
    return r;
}

std::vector<Matrix> decompose_automorphism(const GramLattice& M, const Matrix& f) {
    const RingConfig& R = M.ring();
    require_odd(R, "decompose_automorphism");
    size_t n = M.rank();
    if (f.rows() != n || f.cols() != n) throw DomainError("automorphism has the wrong shape");
    if (!(f.transpose() * M.gram() * f).congruent(M.gram())) throw DomainError("matrix is not an isometry");
    Matrix J = diagonal_decompose(M).transition();
    Matrix Jinv = inverse(J);
    Matrix D = transform_gram(M, J).gram();
    std::vector<Matrix> out;
    Matrix g = f;
    for (size_t k = 0; k < n; ++k) {
        Vec x = J.col(k);
        Vec gx = g * x;
        bool fixed = true;
        for (size_t i = 0; i < n; ++i) fixed &= gx[i].congruent(x[i]);
        if (fixed) continue;
        // Work inside the span of J's columns k.., which g preserves.
        Vec c = Jinv * gx;
        size_t m = n - k;
        Matrix Dk(R, m, m);
        Vec ck(m), e0(m, RingElem::zero(R));
        e0[0] = RingElem::one(R);
        for (size_t i = 0; i < m; ++i) {
            ck[i] = c[k + i];
            for (size_t j = 0; j < m; ++j) Dk(i, j) = D(k + i, k + j);
        }
        Matrix rk = reflection_taking(GramLattice(Dk), ck, e0);
        Matrix big = Matrix::identity(R, n);
        for (size_t i = 0; i < m; ++i)
            for (size_t j = 0; j < m; ++j) big(k + i, k + j) = rk(i, j);
        Matrix r = J * big * Jinv;
        out.push_back(r);
        g = r * g;
    }
    if (!g.congruent(Matrix::identity(R, n))) throw IndeterminateValuation("reflection factorization lost precision");
    return out;
}

Matrix lift_isometry(const GramLattice& M, const GramLattice& N, const Matrix& phi) {
    const RingConfig& R = M.ring();
    if (!(N.ring() == R) || !(phi.ring() == R)) throw ConfigError("lift_isometry: ring mismatch");
    size_t n = N.rank();
    if (M.rank() != n || phi.rows() != n || phi.cols() != n) throw DomainError("lift_isometry: rank mismatch");
    if (n == 0) return phi;
    if (!determinant(phi).is_unit()) throw NotApproximatelyIsometric("approximate isometry is not invertible");

    JordanDecomposition jd = diagonal_decompose(N);
    const ValGroupElem v2 = R.v2();
    const ValGroupElem level = jd.last_valuation() + v2 + v2;
    const Matrix& G = M.gram();
    Matrix diff = phi.transpose() * G * phi - N.gram();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!diff(i, j).val_gt(level))
                throw NotApproximatelyIsometric("form is not preserved modulo I_" + level.to_string());

    Matrix J = jd.transition();
    Matrix D = transform_gram(N, J).gram();
    Matrix F = phi * J;  // images of the orthogonal pieces
    auto check_gt = [&](const RingElem& a, const ValGroupElem& g, const char* what) {
        if (!a.val_gt(g)) throw DomainError(std::string("lift_isometry: ") + what + " has unexpected valuation");
    };

    size_t at = 0;
    std::vector<size_t> pieces;
    for (const auto& b : jd.blocks)
        for (size_t s : b.pieces) pieces.push_back(s);
    for (size_t s : pieces) {
        if (s == 1) {
            Vec fx = column(F, at);
            RingElem xx = D(at, at);
            RingElem ratio = xx / pair(G, fx, fx);
            RingElem c = RingElem::one(R) + sqrt_one_plus(ratio - RingElem::one(R));
            check_gt(c - RingElem::one(R), v2, "c - 1");
            Vec nx = scaled(c, fx);
            F.set_col(at, nx);
            for (size_t j = at + 1; j < n; ++j) {
                Vec fj = column(F, j);
                RingElem a = pair(G, fj, nx) / xx;
                check_gt(a, v2 + v2, "complement coefficient");
                F.set_col(j, axpy(fj, -a, nx));
            }
        } else {
            size_t ix = at, iy = at + 1;
            Vec fx = column(F, ix), fy = column(F, iy);
            RingElem x2 = D(ix, ix), y2 = D(iy, iy), xy = D(ix, iy);
            RingElem X = pair(G, fx, fx), Y = pair(G, fy, fy), P = pair(G, fx, fy);
            RingElem two(R, 2);
            RingElem t = solve_quadratic(X, two * P, Y - y2);
            RingElem Delta = x2 * y2 - xy * xy;
            RingElem Dphi = X * Y - P * P;
            RingElem q = x2 * Dphi / Delta;
            RingElem s = solve_quadratic(Y - t * t * q, two * P + two * t * q, X - q);
            check_gt(s, v2, "s");
            check_gt(t, v2, "t");
            RingElem c = xy / ((RingElem::one(R) + s * t) * P + s * Y + t * X);
            check_gt(c - RingElem::one(R), v2, "c - 1");
            Vec nx = scaled(c, axpy(fx, s, fy));
            Vec ny = axpy(fy, t, fx);
            F.set_col(ix, nx);
            F.set_col(iy, ny);
            for (size_t j = at + 2; j < n; ++j) {
                Vec fj = column(F, j);
                RingElem p = pair(G, fj, nx), r = pair(G, fj, ny);
                RingElem a = (y2 * p - xy * r) / Delta;
                RingElem b = (x2 * r - xy * p) / Delta;
                check_gt(a, v2 + v2, "complement coefficient");
                check_gt(b, v2 + v2, "complement coefficient");
                F.set_col(j, axpy(axpy(fj, -a, nx), -b, ny));
            }
        }
        at += s;
    }
    Matrix psi = F * inverse(J);
    if (!(psi.transpose() * G * psi).congruent(N.gram()))
        throw IndeterminateValuation("lift_isometry: precision exhausted");
    return psi;
}

}  // namespace vlat
