#ifndef DMFLAG_LINALG_HPP
#define DMFLAG_LINALG_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dmflag/scalar.hpp"

namespace dmflag {

// Sparse matrix over the coefficient field, built entry by entry.
// Duplicate entries accumulate.
class SparseMat {
public:
    SparseMat(uint64_t characteristic, size_t rows, size_t cols);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    uint64_t characteristic() const { return p_; }

    void add(size_t r, size_t c, Scalar v);

    // Exact rank via sparse Gaussian elimination. The matrix is first split
    // into connected components of its row/column bipartite graph; each
    // component is eliminated with Markowitz-style pivoting.
    size_t rank() const;

    // Particular solution of A x = b (free variables set to 0), or nullopt
    // when the system is inconsistent.
    std::optional<std::vector<Scalar>> solve(
        const std::vector<Scalar>& b) const;

private:
    struct Entry {
        uint32_t row, col;
        Scalar val;
    };
    uint64_t p_;
    size_t rows_, cols_;
    std::vector<Entry> entries_;
};

// Growing linear system over the field, kept in reduced row-echelon form.
// Equations are added one at a time; inconsistency is reported immediately.
class IncrementalSystem {
public:
    explicit IncrementalSystem(uint64_t characteristic) : p_(characteristic) {}

    // Row: sparse (unknown id -> coefficient), plus a right-hand side.
    // Returns false iff the new equation is inconsistent with the system.
    bool add_equation(std::unordered_map<int, Scalar> row, Scalar rhs);

    // Value of an unknown in the canonical solution (free unknowns = 0).
    Scalar value(int unknown) const;

private:
    struct Row {
        std::unordered_map<int, Scalar> coeffs;  // pivot has coefficient 1
        Scalar rhs;
    };
    uint64_t p_;
    std::unordered_map<int, Row> pivots_;  // pivot unknown -> row

    void reduce(std::unordered_map<int, Scalar>& row, Scalar& rhs) const;
};

}  // namespace dmflag

#endif
