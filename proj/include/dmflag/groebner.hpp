#ifndef DMFLAG_GROEBNER_HPP
#define DMFLAG_GROEBNER_HPP

#include <variant>
#include <vector>

#include "dmflag/poly.hpp"

namespace dmflag {

// Reduced Groebner basis of an ideal, remembering how each basis element
// is written in terms of the input generators.
class GroebnerBasis {
public:
    GroebnerBasis(std::vector<Polynomial> gens,
                  MonomialOrder order = MonomialOrder::grevlex);

    const std::vector<Polynomial>& generators() const { return basis_; }
    const std::vector<Polynomial>& inputs() const { return inputs_; }
    MonomialOrder order() const { return order_; }

    // basis[i] = sum_j transformation(i, j) * inputs[j], exactly.
    const Polynomial& transformation(size_t i, size_t j) const {
        return trans_[i][j];
    }

private:
    std::vector<Polynomial> inputs_;
    std::vector<Polynomial> basis_;
    std::vector<std::vector<Polynomial>> trans_;
    MonomialOrder order_;
};

struct NormalFormResult {
    Polynomial remainder;
    std::vector<Polynomial> cofactors;  // over the basis elements
};

// Division with remainder: p = sum cofactor_i * basis_i + remainder, and no
// remainder term is divisible by any basis leading term.
NormalFormResult normal_form(const Polynomial& p, const GroebnerBasis& gb);
// Same, dividing by an explicit list (not necessarily a GB).
NormalFormResult normal_form(const Polynomial& p,
                             const std::vector<Polynomial>& divisors,
                             MonomialOrder order = MonomialOrder::grevlex);

struct MembershipWitness {
    std::vector<Polynomial> cofactors;  // over the original generators
};
struct NotMember {
    Polynomial normal_form;
};
using MembershipResult = std::variant<MembershipWitness, NotMember>;

// Decides p in (gens); a Member result carries verified cofactors over the
// *original* generators.
MembershipResult ideal_membership(const Polynomial& p,
                                  const std::vector<Polynomial>& gens);
MembershipResult ideal_membership(const Polynomial& p,
                                  const GroebnerBasis& gb);

inline bool is_member(const MembershipResult& r) {
    return std::holds_alternative<MembershipWitness>(r);
}

}  // namespace dmflag

#endif
