#ifndef DMFLAG_EXTERIOR_HPP
#define DMFLAG_EXTERIOR_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dmflag/poly.hpp"

namespace dmflag {

// Subsets of [n] = {1..n} as bitmasks; bit i-1 stands for the element i.
// n <= 62.
using IndexSet = uint64_t;

int set_size(IndexSet s);
IndexSet full_set(int n);
// All size-k subsets of [n], ordered lexicographically as sorted tuples
// ({1,2} < {1,3} < ... < {2,3} < ...), the layout used for wedge bases.
std::vector<IndexSet> subsets_of_size(int n, int k);
// All nonempty subsets, by size then tuple-lex.
std::vector<IndexSet> nonempty_subsets(int n);
std::string index_set_str(IndexSet s);
IndexSet parse_index_set(const std::string& text, int n);

// Parity of the shuffle placing S (sorted) before T (sorted): -1 to the
// number of pairs s in S, t in T with t < s. S and T must be disjoint.
int shuffle_sign(IndexSet s, IndexSet t);

// Sign making e_I ^ e_([n] \ I) = complement_sign(I, n) * e_[n].
int complement_sign(IndexSet I, int n);

// Element of the exterior algebra /\E with polynomial coefficients.
class ExteriorElement {
public:
    ExteriorElement(const PolyRing& ring, int n);
    static ExteriorElement basis(const PolyRing& ring, int n, IndexSet I);

    const PolyRing& ring() const { return ring_; }
    int n() const { return n_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<IndexSet, Polynomial>& coefficients() const {
        return coeffs_;
    }
    Polynomial coefficient(IndexSet I) const;
    void add_term(IndexSet I, const Polynomial& c);

    ExteriorElement operator+(const ExteriorElement& o) const;
    ExteriorElement operator-() const;
    ExteriorElement mul_poly(const Polynomial& p) const;
    bool operator==(const ExteriorElement& o) const;

    // Homogeneous exterior weight when all terms share it; -1 if mixed,
    // 0 for the zero element.
    int weight() const;

    std::string str() const;

private:
    PolyRing ring_;
    int n_;
    std::map<IndexSet, Polynomial> coeffs_;
};

// Element of /\^i E*, acting on /\E by left contraction. All keys have
// size exactly the weight.
class DualElement {
public:
    DualElement(const PolyRing& ring, int n, int weight);
    // e_I* for |I| = weight.
    static DualElement basis(const PolyRing& ring, int n, IndexSet I);

    const PolyRing& ring() const { return ring_; }
    int n() const { return n_; }
    int weight() const { return weight_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<IndexSet, Polynomial>& coefficients() const {
        return coeffs_;
    }
    Polynomial coefficient(IndexSet I) const;
    void add_term(IndexSet I, const Polynomial& c);

    DualElement operator+(const DualElement& o) const;
    DualElement operator-() const;
    DualElement mul_poly(const Polynomial& p) const;
    bool operator==(const DualElement& o) const;

    // Grammar: `x1*e{1} + x2*e{2}`, `e{1,3,4}`; coefficients follow the
    // polynomial grammar (wrap composite ones in the `(p)*e{...}` form).
    std::string str() const;
    static DualElement parse(const PolyRing& ring, int n,
                             const std::string& text);

private:
    PolyRing ring_;
    int n_;
    int weight_;
    std::map<IndexSet, Polynomial> coeffs_;
};

// e_I ^ e_J = shuffle_sign(I, J) e_{I u J} when disjoint, else 0,
// extended bilinearly.
ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b);

// Left contraction: e_S* . e_I = shuffle_sign(S, I\S) e_{I\S} when S <= I,
// else 0, extended bilinearly. Operators compose contravariantly:
// contract(f, contract(g, x)) = contract(dual_wedge(g, f), x).
ExteriorElement contract(const DualElement& f, const ExteriorElement& a);

// Product in /\E*, same shuffle sign rule as wedge.
DualElement dual_wedge(const DualElement& a, const DualElement& b);

// True iff x -> contract(f, contract(g, x)) is the zero operator.
bool dual_compose_is_zero(const DualElement& f, const DualElement& g);

}  // namespace dmflag

#endif
