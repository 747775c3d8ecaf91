#ifndef DMFLAG_FLAGS_HPP
#define DMFLAG_FLAGS_HPP

#include <variant>

#include "dmflag/diffmod.hpp"
#include "dmflag/groebner.hpp"

namespace dmflag {

// True iff the flag's level ranks match the anchor and every first
// off-diagonal block A_{i,i-1} equals the anchor differential d_i.
bool anchored_check(const FreeFlag& flag, const ChainComplex& anchor);

// True iff the anchor is the Koszul complex of the dual read off its d_1
// (rank-1 level 0). This is the structural stand-in for the complete
// intersection hypothesis; regularity of the sequence itself is the
// caller's responsibility.
bool is_koszul_shaped(const ChainComplex& anchor);

struct IsoToFold {
    Matrix change_of_basis;  // phi with d_fold phi = phi d_flag, unitriangular
};
struct NotIso {
    int level;              // the i of the failing block A_{i,0}
    Polynomial entry;
    Polynomial normal_form;  // nonzero remainder against (entries of d_1)
};
using FoldDecision = std::variant<IsoToFold, NotIso>;

// Decision procedure for "flag isomorphic to the fold of its anchor" when
// the homology is a complete intersection: every entry of every A_{i,0}
// (i >= 2) must lie in the ideal of the d_1 entries. On success the
// change of basis is constructed and verified; on failure the first bad
// entry is returned with its nonzero normal form. A NotIso verdict implies
// non-isomorphism only under the complete intersection hypothesis.
FoldDecision fold_decision_ci(const FreeFlag& flag, const ChainComplex& anchor);

struct CancelResult {
    FreeFlag flag;           // all blocks with i - j >= 2 are zero
    Matrix change_of_basis;  // unitriangular; d_new phi = phi d_old
};

// Constructive cancellation: clears the diagonals i-j = 2, 3, ... in order
// (increasing i within each diagonal), consuming Groebner membership
// witnesses at level 0 and exact degreewise lifts through d_{l+1} above.
CancelResult cancel_diagonals(const FreeFlag& flag, const ChainComplex& anchor);

enum class DegreeVerdict { ForcedFold, Indeterminate };

// Degree bookkeeping for anchored flags over the Koszul complex on all the
// ring variables, with level twists i*a: for a != 2 every A_{i,0} entry has
// nonzero degree, so it lies in the maximal ideal and the flag folds. The
// memberships are verified, not just asserted. a = 2 is the one open case.
DegreeVerdict degree_analysis(const FreeFlag& flag, int degree_a);

}  // namespace dmflag

#endif
