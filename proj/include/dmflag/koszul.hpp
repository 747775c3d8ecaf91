#ifndef DMFLAG_KOSZUL_HPP
#define DMFLAG_KOSZUL_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "dmflag/diffmod.hpp"
#include "dmflag/exterior.hpp"

namespace dmflag {

// The classical Koszul complex on psi in E*: /\^i E in homological degree i,
// differential contraction by psi. Twists come from the degrees of psi's
// coefficients (weight 1 for zero slots); ungraded if some coefficient is
// inhomogeneous.
ChainComplex koszul_complex(const DualElement& psi, int n);

// Duals f_1,...  for the Koszul differential module; duals[w-1] has weight w
// and may be the zero element.
struct KoszulData {
    int n = 0;
    std::vector<DualElement> duals;

    static KoszulData make(int n, std::vector<DualElement> duals);
    const DualElement& dual(int weight) const { return duals.at(weight - 1); }
};

// The differential module on /\E with blocks A_{i,j} = (-1)^{ij} f_{i-j}
// acting by contraction. Valid in characteristic 2, or when every pair of
// even-weight duals composes to the zero operator. In graded mode the level
// twists are inferred from the dual coefficient degrees and degree_a.
FreeFlag koszul_dm(const KoszulData& data, int degree_a, bool graded);

// Specializes the generic duals f_w = sum_{|I|=w} x_I e_I* under an
// assignment of every nonempty I to a value in `ring`, checking that the
// even-pair relations hold for the specialized values.
FreeFlag specialize_generic_koszul(const PolyRing& ring, int n,
                                   const std::map<IndexSet, Polynomial>& assignment,
                                   int degree_a = 1);

// Degree-2 free differential module of rank 2^(n-1) over k[x1..xn] with
// one-dimensional homology: the 2x2 base case, then iterated mapping cones
// over each fresh variable.
DifferentialModule small_rank_dm(int n, uint64_t characteristic = 0);

// --- gallery ----------------------------------------------------------------

using GalleryItem = std::variant<DifferentialModule, FreeFlag>;

// Known ids: ex1.2 (takes f), ex3.3, ex4.1, ex4.6, ex5.4, cor3.x-corner1,
// smallrank-n<k>.
GalleryItem gallery(const std::string& id, uint64_t characteristic = 0,
                    const std::optional<std::string>& f_text = std::nullopt);
std::vector<std::string> gallery_ids();

const DifferentialModule& gallery_dm(const GalleryItem& item);

// The rank-4 family D_f over f.ring() = k[x1,x2]: Koszul fold plus f in the
// corner; graded (degree 0) when f is zero or homogeneous of degree 2.
FreeFlag gallery_ex12(const Polynomial& f);

}  // namespace dmflag

#endif
