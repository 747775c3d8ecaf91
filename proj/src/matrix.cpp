#include "dmflag/matrix.hpp"

#include <sstream>

namespace dmflag {

Matrix::Matrix(const PolyRing& ring, size_t rows, size_t cols)
    : ring_(ring), rows_(rows), cols_(cols),
      a_(rows * cols, Polynomial::zero(ring)) {}

Matrix Matrix::identity(const PolyRing& ring, size_t n) {
    Matrix m(ring, n, n);
    for (size_t i = 0; i < n; ++i)
        m.set(i, i, Polynomial::constant(ring, 1));
    return m;
}

Matrix Matrix::from_rows(const PolyRing& ring,
                         std::vector<std::vector<Polynomial>> rows) {
    size_t nr = rows.size();
    size_t nc = nr == 0 ? 0 : rows[0].size();
    Matrix m(ring, nr, nc);
    for (size_t r = 0; r < nr; ++r) {
        if (rows[r].size() != nc) throw ShapeMismatch("ragged matrix rows");
        for (size_t c = 0; c < nc; ++c) {
            if (rows[r][c].ring() != ring)
                throw RingMismatch("matrix entry over wrong ring");
            m.a_[r * nc + c] = std::move(rows[r][c]);
        }
    }
    return m;
}

void Matrix::set(size_t r, size_t c, Polynomial p) {
    if (p.ring() != ring_) throw RingMismatch("matrix entry over wrong ring");
    a_[r * cols_ + c] = std::move(p);
}

bool Matrix::is_zero() const {
    for (const auto& p : a_)
        if (!p.is_zero()) return false;
    return true;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ShapeMismatch("matrix addition shape mismatch");
    Matrix m(ring_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator-() const {
    Matrix m(*this);
    for (auto& p : m.a_) p = -p;
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw ShapeMismatch("matrix product shape mismatch");
    Matrix m(ring_, rows_, o.cols_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t k = 0; k < cols_; ++k) {
            const Polynomial& x = at(r, k);
            if (x.is_zero()) continue;
            for (size_t c = 0; c < o.cols_; ++c) {
                const Polynomial& y = o.at(k, c);
                if (y.is_zero()) continue;
                m.a_[r * o.cols_ + c] = m.a_[r * o.cols_ + c] + x * y;
            }
        }
    return m;
}

Matrix Matrix::mul_poly(const Polynomial& p) const {
    Matrix m(*this);
    for (auto& q : m.a_) q = q * p;
    return m;
}

bool Matrix::operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || ring_ != o.ring_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

Matrix Matrix::transpose() const {
    Matrix m(ring_, cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c) m.set(c, r, at(r, c));
    return m;
}

Matrix Matrix::submatrix(size_t r0, size_t c0, size_t nr, size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw ShapeMismatch("submatrix out of range");
    Matrix m(ring_, nr, nc);
    for (size_t r = 0; r < nr; ++r)
        for (size_t c = 0; c < nc; ++c) m.set(r, c, at(r0 + r, c0 + c));
    return m;
}

void Matrix::paste(size_t r0, size_t c0, const Matrix& block) {
    if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
        throw ShapeMismatch("paste out of range");
    for (size_t r = 0; r < block.rows(); ++r)
        for (size_t c = 0; c < block.cols(); ++c)
            set(r0 + r, c0 + c, block.at(r, c));
}

std::vector<Polynomial> Matrix::apply(
    const std::vector<Polynomial>& v) const {
    if (v.size() != cols_) throw ShapeMismatch("apply() length mismatch");
    std::vector<Polynomial> out(rows_, Polynomial::zero(ring_));
    for (size_t c = 0; c < cols_; ++c) {
        if (v[c].is_zero()) continue;
        for (size_t r = 0; r < rows_; ++r) {
            if (at(r, c).is_zero()) continue;
            out[r] = out[r] + at(r, c) * v[c];
        }
    }
    return out;
}

namespace {

// Pivot preference for fraction-free elimination: fewest terms, constants
// first. Returns npos when the region is all zero.
size_t pick_pivot_row(const std::vector<std::vector<Polynomial>>& m, size_t k,
                      size_t col, size_t n) {
    size_t best = size_t(-1);
    size_t best_score = size_t(-1);
    for (size_t r = k; r < n; ++r) {
        const Polynomial& p = m[r][col];
        if (p.is_zero()) continue;
        size_t score = p.term_count() * 2 + (p.is_constant() ? 0 : 1);
        if (score < best_score) {
            best_score = score;
            best = r;
        }
    }
    return best;
}

}  // namespace

Polynomial Matrix::determinant() const {
    if (rows_ != cols_) throw ShapeMismatch("determinant of nonsquare matrix");
    const size_t n = rows_;
    if (n == 0) return Polynomial::constant(ring_, 1);
    std::vector<std::vector<Polynomial>> m(n);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) m[r].push_back(at(r, c));
    bool neg = false;
    Polynomial prev = Polynomial::constant(ring_, 1);
    for (size_t k = 0; k + 1 < n; ++k) {
        size_t pr = pick_pivot_row(m, k, k, n);
        if (pr == size_t(-1)) return Polynomial::zero(ring_);
        if (pr != k) {
            std::swap(m[pr], m[k]);
            neg = !neg;
        }
        for (size_t r = k + 1; r < n; ++r) {
            for (size_t c = k + 1; c < n; ++c) {
                Polynomial num = m[k][k] * m[r][c] - m[r][k] * m[k][c];
                auto q = divide_exact(num, prev);
                if (!q) throw Error("Bareiss division not exact");
                m[r][c] = std::move(*q);
            }
            m[r][k] = Polynomial::zero(ring_);
        }
        prev = m[k][k];
    }
    Polynomial det = m[n - 1][n - 1];
    return neg ? -det : det;
}

Matrix Matrix::inverse() const {
    if (rows_ != cols_) throw ShapeMismatch("inverse of nonsquare matrix");
    const size_t n = rows_;
    Polynomial det = determinant();
    if (det.is_zero() || !det.is_constant())
        throw Error("matrix not invertible over the polynomial ring");
    const Scalar det_c = det.constant_coefficient();

    // Montante (fraction-free Gauss-Jordan) on [A | I]; divisions by the
    // previous pivot are exact over an integral domain. Afterwards the
    // right block equals +-det * A^-1 up to the row permutation.
    const size_t w = 2 * n;
    std::vector<std::vector<Polynomial>> m(n);
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = 0; c < n; ++c) m[r].push_back(at(r, c));
        for (size_t c = 0; c < n; ++c)
            m[r].push_back(r == c ? Polynomial::constant(ring_, 1)
                                  : Polynomial::zero(ring_));
    }
    Polynomial prev = Polynomial::constant(ring_, 1);
    for (size_t k = 0; k < n; ++k) {
        size_t pr = pick_pivot_row(m, k, k, n);
        if (pr == size_t(-1)) throw Error("singular matrix in inverse()");
        if (pr != k) std::swap(m[pr], m[k]);
        for (size_t r = 0; r < n; ++r) {
            if (r == k) continue;
            for (size_t c = 0; c < w; ++c) {
                if (c == k) continue;
                Polynomial num = m[k][k] * m[r][c] - m[r][k] * m[k][c];
                auto q = divide_exact(num, prev);
                if (!q) throw Error("Montante division not exact");
                m[r][c] = std::move(*q);
            }
            m[r][k] = Polynomial::zero(ring_);
        }
        prev = m[k][k];
    }
    Matrix inv(ring_, n, n);
    for (size_t r = 0; r < n; ++r) {
        // Diagonal entries all equal +-det after the sweep; divide rowwise.
        const Polynomial& d = m[r][r];
        if (d.is_zero() || !d.is_constant())
            throw Error("Montante sweep failed");
        Scalar s = d.constant_coefficient().inverse();
        for (size_t c = 0; c < n; ++c)
            inv.set(r, c, m[r][n + c].mul_scalar(s));
    }
    if (!(*this * inv == identity(ring_, n)))
        throw Error("inverse verification failed");
    (void)det_c;
    return inv;
}

std::string Matrix::str() const {
    std::ostringstream os;
    for (size_t r = 0; r < rows_; ++r) {
        os << (r == 0 ? "[" : " ") << "[";
        for (size_t c = 0; c < cols_; ++c) {
            if (c) os << ", ";
            os << at(r, c).str();
        }
        os << "]" << (r + 1 == rows_ ? "]" : ",\n");
    }
    return os.str();
}

}  // namespace dmflag
