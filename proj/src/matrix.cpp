#include "vlat/matrix.hpp"

#include "vlat/errors.hpp"

namespace vlat {

Matrix::Matrix(const RingConfig& ring, size_t rows, size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), a_(rows * cols, RingElem::zero(ring)) {}

Matrix Matrix::identity(const RingConfig& ring, size_t n) {
    Matrix m(ring, n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = RingElem::one(ring);
    return m;
}

Matrix Matrix::from_rows(const RingConfig& ring, const std::vector<std::vector<long>>& rows) {
    std::vector<Vec> r;
    for (const auto& row : rows) {
        Vec v;
        for (long x : row) v.push_back(x == 0 ? RingElem::zero(ring) : RingElem(ring, x));
        r.push_back(std::move(v));
    }
    return from_rows(ring, r);
}

Matrix Matrix::from_rows(const RingConfig& ring, const std::vector<Vec>& rows) {
    size_t n = rows.size(), m = n ? rows[0].size() : 0;
    Matrix out(ring, n, m);
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m) throw DomainError("ragged matrix rows");
        for (size_t j = 0; j < m; ++j) out(i, j) = rows[i][j];
    }
    return out;
}

Matrix Matrix::from_cols(const RingConfig& ring, size_t rows, const std::vector<Vec>& cols) {
    Matrix out(ring, rows, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) out.set_col(j, cols[j]);
    return out;
}

Matrix Matrix::diagonal(const RingConfig& ring, const Vec& d) {
    Matrix m(ring, d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Vec Matrix::col(size_t j) const {
    Vec v;
    v.reserve(rows_);
    for (size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
}

Vec Matrix::row(size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

void Matrix::set_col(size_t j, const Vec& v) {
    if (v.size() != rows_) throw DomainError("column length mismatch");
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DomainError("matrix shape mismatch in product");
    Matrix r(ring_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const RingElem& a = (*this)(i, k);
            if (a.is_exact_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch in sum");
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch in difference");
    Matrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

Matrix Matrix::scaled(const RingElem& s) const {
    Matrix r = *this;
    for (auto& x : r.a_) x *= s;
    return r;
}

Vec Matrix::operator*(const Vec& v) const {
    if (v.size() != cols_) throw DomainError("vector length mismatch");
    Vec r(rows_, RingElem::zero(ring_));
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (!(*this)(i, j).is_exact_zero() && !v[j].is_exact_zero()) r[i] += (*this)(i, j) * v[j];
    return r;
}

Matrix Matrix::submatrix(const std::vector<size_t>& rs, const std::vector<size_t>& cs) const {
    Matrix r(ring_, rs.size(), cs.size());
    for (size_t i = 0; i < rs.size(); ++i)
        for (size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
    return r;
}

Matrix Matrix::truncated(const ValGroupElem& g) const {
    Matrix r = *this;
    for (auto& x : r.a_) x = x.truncated(g);
    return r;
}

bool Matrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = i + 1; j < cols_; ++j)
            if (!(*this)(i, j).congruent((*this)(j, i))) return false;
    return true;
}

bool Matrix::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Matrix::entries_val_ge(const ValGroupElem& g) const {
    for (const auto& x : a_)
        if (!x.val_ge(g)) return false;
    return true;
}

std::string Matrix::to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < rows_; ++i) {
        s += i ? ", [" : "[";
        for (size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
        s += "]";
    }
    return s + "]";
}

RingElem dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size() || x.empty()) throw DomainError("dot product of mismatched vectors");
    RingElem s = RingElem::zero(x[0].ring());
    for (size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_exact_zero() && !y[i].is_exact_zero()) s += x[i] * y[i];
    return s;
}

namespace {

// Position of the certified-nonzero entry of least valuation in the trailing
// block, or nothing when the block is zero to precision.
bool find_pivot(const Matrix& a, size_t k, size_t& pi, size_t& pj) {
    bool found = false;
    ValGroupElem best;
    for (size_t i = k; i < a.rows(); ++i)
        for (size_t j = k; j < a.cols(); ++j) {
            const RingElem& x = a(i, j);
            if (x.is_zero()) continue;
            ValGroupElem v = x.valuation();
            if (!found || v < best) {
                found = true;
                best = v;
                pi = i;
                pj = j;
            }
        }
    return found;
}

void swap_rows(Matrix& a, size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}

void swap_cols(Matrix& a, size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
}

}  // namespace

RingElem determinant(const Matrix& m0) {
    if (m0.rows() != m0.cols()) throw DomainError("determinant of a non-square matrix");
    const RingConfig& R = m0.ring();
    size_t n = m0.rows();
    Matrix a = m0;
    RingElem det = RingElem::one(R);
    bool negate = false;
    for (size_t k = 0; k < n; ++k) {
        size_t pi = k, pj = k;
        if (!find_pivot(a, k, pi, pj)) {
            // Remaining block is zero to precision: bound it by its weakest entry.
            size_t bi = k, bj = k;
            for (size_t i = k; i < n; ++i)
                for (size_t j = k; j < n; ++j)
                    if (a(i, j).lower_bound() < a(bi, bj).lower_bound()) {
                        bi = i;
                        bj = j;
                    }
            return det * a(bi, bj).pow(static_cast<int64_t>(n - k));
        }
        if (pi != k) negate = !negate;
        if (pj != k) negate = !negate;
        swap_rows(a, k, pi);
        swap_cols(a, k, pj);
        RingElem piv = a(k, k);
        det *= piv;
        RingElem inv = piv.inverse();
        for (size_t i = k + 1; i < n; ++i) {
            if (a(i, k).is_exact_zero()) continue;
            RingElem f = a(i, k) * inv;
            for (size_t j = k + 1; j < n; ++j)
                if (!a(k, j).is_exact_zero()) a(i, j) -= f * a(k, j);
        }
    }
    return negate ? -det : det;
}

Matrix inverse(const Matrix& m0) {
    if (m0.rows() != m0.cols()) throw DomainError("inverse of a non-square matrix");
    const RingConfig& R = m0.ring();
    size_t n = m0.rows();
    Matrix a = m0, b = Matrix::identity(R, n);
    std::vector<size_t> colperm(n);
    for (size_t i = 0; i < n; ++i) colperm[i] = i;
    for (size_t k = 0; k < n; ++k) {
        size_t pi = k, pj = k;
        if (!find_pivot(a, k, pi, pj)) throw DomainError("matrix is singular at working precision");
        swap_rows(a, k, pi);
        swap_rows(b, k, pi);
        swap_cols(a, k, pj);
        std::swap(colperm[k], colperm[pj]);
        RingElem inv = a(k, k).inverse();
        for (size_t j = 0; j < n; ++j) {
            a(k, j) *= inv;
            b(k, j) *= inv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k).is_exact_zero()) continue;
            RingElem f = a(i, k);
            for (size_t j = 0; j < n; ++j) {
                if (!a(k, j).is_exact_zero()) a(i, j) -= f * a(k, j);
                if (!b(k, j).is_exact_zero()) b(i, j) -= f * b(k, j);
            }
        }
    }
    // a is now a column permutation of the identity: A P = ... so A^-1 = P b.
    Matrix out(R, n, n);
    for (size_t k = 0; k < n; ++k)
        for (size_t j = 0; j < n; ++j) out(colperm[k], j) = b(k, j);
    return out;
}

}  // namespace vlat
