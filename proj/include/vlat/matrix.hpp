#pragma once

#include <vector>

#include "vlat/ring.hpp"

namespace vlat {

using Vec = std::vector<RingElem>;

// Dense matrix over a ring backend. Row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(const RingConfig& ring, size_t rows, size_t cols);

    static Matrix identity(const RingConfig& ring, size_t n);
    static Matrix from_rows(const RingConfig& ring, const std::vector<std::vector<long>>& rows);
    static Matrix from_rows(const RingConfig& ring, const std::vector<Vec>& rows);
    static Matrix from_cols(const RingConfig& ring, size_t rows, const std::vector<Vec>& cols);
    static Matrix diagonal(const RingConfig& ring, const Vec& d);

    const RingConfig& ring() const { return ring_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    RingElem& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const RingElem& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    Vec col(size_t j) const;
    Vec row(size_t i) const;
    void set_col(size_t j, const Vec& v);

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const RingElem& s) const;
    Vec operator*(const Vec& v) const;

    // Rows/columns picked by index lists.
    Matrix submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const;
    Matrix truncated(const ValGroupElem& g) const;

    bool is_symmetric() const;
    // Every entry zero to precision.
    bool is_zero() const;
    // Every entry has valuation >= g (throws when undecidable).
    bool entries_val_ge(const ValGroupElem& g) const;
    bool congruent(const Matrix& o) const { return (*this - o).is_zero(); }

    std::string to_string() const;

private:
    RingConfig ring_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<RingElem> a_;
};

// Gaussian elimination with minimal-valuation pivots, so every multiplier lies in R.
RingElem determinant(const Matrix& m);
// Inverse over the fraction field; DomainError when singular.
Matrix inverse(const Matrix& m);

RingElem dot(const Vec& x, const Vec& y);

}  // namespace vlat
