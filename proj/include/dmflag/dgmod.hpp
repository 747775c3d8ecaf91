#ifndef DMFLAG_DGMOD_HPP
#define DMFLAG_DGMOD_HPP

#include <map>
#include <tuple>
#include <variant>

#include "dmflag/diffmod.hpp"
#include "dmflag/exterior.hpp"

namespace dmflag {

// Multiplication table on a complex: basis pair (level i, index bi) x
// (level j, index bj) -> element of level i+j as a coefficient vector.
// Pairs landing above the top level, and absent pairs, are zero.
class DgProduct {
public:
    using Key = std::tuple<int, int, int, int>;

    void set(int i, int bi, int j, int bj, std::vector<Polynomial> value);
    const std::map<Key, std::vector<Polynomial>>& entries() const {
        return entries_;
    }
    // Bilinear extension on coefficient vectors over levels i and j.
    std::vector<Polynomial> apply(const ChainComplex& c, int i,
                                  const std::vector<Polynomial>& x, int j,
                                  const std::vector<Polynomial>& y) const;

private:
    std::map<Key, std::vector<Polynomial>> entries_;
};

// The wedge product table of a Koszul-complex-shaped complex on /\E.
DgProduct wedge_product(const ChainComplex& koszul);

// Verifies the DG-algebra axioms on all basis pairs: unitality (rank-1
// level 0), Leibniz, graded commutativity, and vanishing odd squares.
bool check_dg_algebra(const ChainComplex& c, const DgProduct& product);

// Candidate DG-module action p: F (x) D -> D as images of basis (x)
// generator pairs. Missing entries are zero.
struct ProductTable {
    // (level i, basis index, generator index) -> element of D.
    std::map<std::tuple<int, int, int>, std::vector<Polynomial>> entries;

    std::vector<Polynomial> get(int i, int b, int g, const PolyRing& ring,
                                size_t rank) const;
};

// True iff p intertwines d^{F box D} and d^D exactly, i.e. the Leibniz rule
// d^D(f.x) = d^F(f).x + (-1)^i f.d^D(x) holds on all basis pairs, and (when
// `unital`) p(1 (x) x) = x. Level i of `c` is twisted by i*deg(d) as in the
// box product. Pairs whose Leibniz identity lives in internal degree above
// `max_eq_deg` are skipped when it is >= 0. Throws NotHomogeneous for table
// entries of mixed degree on graded input.
bool check_dg_module(const ChainComplex& c, const DifferentialModule& d,
                     const ProductTable& p, bool unital = true,
                     long max_eq_deg = -1);

// Transports a verified action along an isomorphism phi: D -> D':
// f ._D x := phi^-1 (f ._{D'} phi(x)). The result is checked before return.
ProductTable transport_product(const Matrix& phi, const DifferentialModule& src,
                               const DifferentialModule& dst,
                               const ChainComplex& c, const ProductTable& p_dst,
                               bool unital = true);

struct DgFeasible {
    ProductTable table;
};
struct DgInfeasible {
    long first_obstructed_degree;
};
using DGSolveResult = std::variant<DgFeasible, DgInfeasible>;

// Sets up, internal degree by internal degree up to max_deg, the exact
// k-linear system in the unknown ProductTable coefficients (Leibniz plus,
// by default, unitality) and solves it. Infeasible verdicts carry the first
// degree whose equations are inconsistent and are a genuine proof that no
// action exists; Feasible tables are certificates up to max_deg and are
// re-checked before return. Equation assembly may run in parallel (jobs);
// the result does not depend on jobs.
DGSolveResult solve_dg_module(const ChainComplex& c,
                              const DifferentialModule& d, int max_deg,
                              bool unital = true, int jobs = 1);

// The printed action table of the gallery flag `ex5.4`.
ProductTable ex54_product_table(const DifferentialModule& d54);

// The wedge-induced action on fold(koszul) (an instance of the fact that a
// fold is a DG-module over its complex).
ProductTable fold_wedge_table(const ChainComplex& koszul);

}  // namespace dmflag

#endif
