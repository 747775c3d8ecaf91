#ifndef DMFLAG_MATRIX_HPP
#define DMFLAG_MATRIX_HPP

#include <functional>
#include <vector>

#include "dmflag/poly.hpp"

namespace dmflag {

// Dense matrix of polynomials. Columns act: a map sends generator c to
// sum_r m(r,c) * generator r.
class Matrix {
public:
    Matrix() = default;
    Matrix(const PolyRing& ring, size_t rows, size_t cols);

    static Matrix identity(const PolyRing& ring, size_t n);
    static Matrix from_rows(const PolyRing& ring,
                            std::vector<std::vector<Polynomial>> rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const PolyRing& ring() const { return ring_; }

    const Polynomial& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
    void set(size_t r, size_t c, Polynomial p);

    bool is_zero() const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator-() const;
    Matrix mul_poly(const Polynomial& p) const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix transpose() const;
    Matrix submatrix(size_t r0, size_t c0, size_t nr, size_t nc) const;
    // Writes `block` into this matrix at (r0, c0).
    void paste(size_t r0, size_t c0, const Matrix& block);

    // Column action on a coefficient vector: result_r = sum_c at(r,c)*v[c].
    std::vector<Polynomial> apply(const std::vector<Polynomial>& v) const;

    // Exact determinant (fraction-free Bareiss elimination).
    Polynomial determinant() const;
    // Exact inverse; requires the determinant to be a nonzero constant.
    // Verifies A * A^-1 == I before returning.
    Matrix inverse() const;

    std::string str() const;

private:
    PolyRing ring_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<Polynomial> a_;
};

}  // namespace dmflag

#endif
