#ifndef DMFLAG_DIFFMOD_HPP
#define DMFLAG_DIFFMOD_HPP

#include <map>
#include <vector>

#include "dmflag/linalg.hpp"
#include "dmflag/matrix.hpp"

namespace dmflag {

// Free graded module. Twist t for a generator means the summand S(t); the
// generator itself sits in internal degree -t.
struct GradedFreeModule {
    PolyRing ring;
    std::vector<int> twists;

    size_t rank() const { return twists.size(); }
    long generator_degree(size_t g) const { return -twists.at(g); }
};

// Free module with a square-zero endomorphism d of internal degree a
// (column action: d(g_c) = sum_r m(r,c) g_r). When graded, every nonzero
// entry (r,c) is homogeneous of weighted degree twist_r - twist_c + a.
class DifferentialModule {
public:
    DifferentialModule() = default;

    const GradedFreeModule& module() const { return module_; }
    const Matrix& matrix() const { return matrix_; }
    int degree() const { return degree_a_; }
    bool graded() const { return graded_; }
    const PolyRing& ring() const { return module_.ring; }
    size_t rank() const { return module_.rank(); }

    // Re-runs the construction-time checks (square-zero, homogeneity).
    void validate() const;

    friend DifferentialModule make_dm(GradedFreeModule module, Matrix matrix,
                                      int degree_a, bool graded);

private:
    GradedFreeModule module_;
    Matrix matrix_;
    int degree_a_ = 0;
    bool graded_ = false;
};

// Validates and wraps the data; throws NotSquareZero / NotHomogeneous.
DifferentialModule make_dm(GradedFreeModule module, Matrix matrix,
                           int degree_a, bool graded);

// Bounded-below complex: modules_[0..m], differentials d_i: F_i -> F_{i-1}
// for 1 <= i <= m, with d_i d_{i+1} = 0. Graded differentials have degree 0.
class ChainComplex {
public:
    ChainComplex(std::vector<GradedFreeModule> modules,
                 std::vector<Matrix> differentials, bool graded);

    size_t length() const { return modules_.size() - 1; }  // top level m
    const GradedFreeModule& level(size_t i) const { return modules_.at(i); }
    // d_i: F_i -> F_{i-1}, valid for 1 <= i <= length().
    const Matrix& differential(size_t i) const { return diffs_.at(i - 1); }
    const PolyRing& ring() const { return modules_[0].ring; }
    bool graded() const { return graded_; }
    size_t total_rank() const;

private:
    std::vector<GradedFreeModule> modules_;
    std::vector<Matrix> diffs_;
    bool graded_;
};

// Differential module with a flag level attached to each generator;
// d maps level i into levels j < i.
class FreeFlag {
public:
    FreeFlag() = default;
    FreeFlag(DifferentialModule dm, std::vector<int> levels);

    const DifferentialModule& dm() const { return dm_; }
    const std::vector<int>& levels() const { return levels_; }
    int max_level() const;
    std::vector<size_t> generators_at_level(int level) const;
    // Block A_{i,j}: rows are level-j generators, columns level-i ones.
    Matrix block(int i, int j) const;

private:
    DifferentialModule dm_;
    std::vector<int> levels_;
};

struct HilbertVector {
    std::vector<long> dims;  // internal degrees 0..max_deg

    bool operator==(const HilbertVector& o) const { return dims == o.dims; }
    HilbertVector operator+(const HilbertVector& o) const;
    std::string str() const;
};

// --- constructions ---------------------------------------------------------

// Fold of a complex as a degree-a differential module; level i is twisted
// by i*a. The result keeps the homological degrees as flag levels.
FreeFlag fold(const ChainComplex& c, int degree_a = 0);

// Mapping cone of multiplication by `multiplier` on `source`:
// (F (x) S) + (F (x) S(s)) with differential [[-d, m*id], [0, d]] where the
// twist shift s = a - deg(multiplier) keeps the cone homogeneous (a zero
// multiplier counts as linear, s = a - 1).
DifferentialModule mapping_cone(const DifferentialModule& source,
                                const Polynomial& multiplier);

// Box product F (x) D: generators (i, b, g) with differential
// d(f_i (x) d) = d^F(f_i) (x) d + (-1)^i f_i (x) d^D(d). Level i of the
// complex is twisted by i*a to match the degree of d^D.
DifferentialModule box_product(const ChainComplex& c,
                               const DifferentialModule& d);

DifferentialModule direct_sum(const DifferentialModule& a,
                              const DifferentialModule& b);
DifferentialModule twist(const DifferentialModule& d, int t);

// Base change along an inclusion of polynomial rings (variables matched by
// name), e.g. ahead of a mapping cone over a fresh variable.
DifferentialModule change_ring(const DifferentialModule& d,
                               const PolyRing& target);

// --- analysis --------------------------------------------------------------

// True iff d^dst phi = phi d^src exactly.
bool verify_morphism(const Matrix& phi, const DifferentialModule& src,
                     const DifferentialModule& dst);
// Morphism with determinant a nonzero constant.
bool verify_isomorphism(const Matrix& phi, const DifferentialModule& src,
                        const DifferentialModule& dst);

bool is_minimal(const DifferentialModule& d);

// Dimensions of ker(d)/im(d(-a)) in internal degrees 0..max_deg, computed
// by exact rank of the degreewise coefficient matrices. Degrees may be
// evaluated in parallel (jobs > 1); the result does not depend on jobs.
HilbertVector homology_hilbert(const DifferentialModule& d, int max_deg,
                               int jobs = 1);

// Dimension of the degree-t slice of a graded module.
long graded_piece_dim(const GradedFreeModule& m, long t);

// Spec default certificate bound: 2*sum(|twists|) + 2*degree + 4.
int default_max_deg(const DifferentialModule& d);

// --- degreewise scalar slices (shared with flags/dgmod) --------------------

// Basis of the degree-t slice: pairs (generator, monomial).
struct SliceBasis {
    std::vector<std::pair<size_t, Monomial>> elems;
    std::map<std::pair<size_t, std::vector<uint32_t>>, int> index;
};
SliceBasis slice_basis(const GradedFreeModule& m, long t);
std::vector<Monomial> monomials_of_weighted_degree(const PolyRing& ring,
                                                   long d);

// Coefficient matrix of a polynomial matrix `mat` (columns over `src`,
// rows over `dst`) restricted to source degree t, target degree t + a.
SparseMat degree_slice(const Matrix& mat, const GradedFreeModule& src,
                       const GradedFreeModule& dst, long t, int a,
                       const SliceBasis& src_basis,
                       const SliceBasis& dst_basis);

}  // namespace dmflag

#endif
