#include "dmflag/groebner.hpp"

#include <algorithm>
#include <deque>

namespace dmflag {

namespace {

// One working element: the polynomial plus its expression in the inputs.
struct Tracked {
    Polynomial poly;
    std::vector<Polynomial> rep;
};

Tracked tracked_input(const std::vector<Polynomial>& inputs, size_t j) {
    Tracked t;
    t.poly = inputs[j];
    const PolyRing& ring = inputs[j].ring();
    t.rep.assign(inputs.size(), Polynomial::zero(ring));
    t.rep[j] = Polynomial::constant(ring, 1);
    return t;
}

// Full reduction of `t` by the current basis, keeping the representation
// in sync. Returns the reduced element.
Tracked reduce_tracked(Tracked t, const std::vector<Tracked>& basis,
                       MonomialOrder order) {
    const PolyRing& ring = t.poly.ring();
    Polynomial rem = Polynomial::zero(ring);
    Polynomial work = t.poly;
    while (!work.is_zero()) {
        const Term& lt = work.leading_term();
        bool reduced = false;
        for (const auto& g : basis) {
            if (g.poly.is_zero()) continue;
            const Term& lg = g.poly.leading_term();
            if (!lg.mono.divides(lt.mono)) continue;
            Scalar c = lt.coeff / lg.coeff;
            Monomial m = lg.mono.divide_into(lt.mono);
            work = work - g.poly.mul_term(c, m);
            for (size_t j = 0; j < t.rep.size(); ++j)
                t.rep[j] = t.rep[j] - g.rep[j].mul_term(c, m);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem = rem + Polynomial::term(ring, lt.coeff, lt.mono);
            work = work - Polynomial::term(ring, lt.coeff, lt.mono);
        }
    }
    (void)order;
    t.poly = std::move(rem);
    return t;
}

}  // namespace

GroebnerBasis::GroebnerBasis(std::vector<Polynomial> gens, MonomialOrder order)
    : order_(order) {
    if (gens.empty()) throw PreconditionViolated("buchberger: no generators");
    const PolyRing ring = gens[0].ring();
    for (const auto& g : gens)
        if (g.ring() != ring) throw RingMismatch("generators over mixed rings");
    inputs_ = gens;

    std::vector<Tracked> basis;
    for (size_t j = 0; j < gens.size(); ++j) {
        if (gens[j].is_zero()) continue;
        basis.push_back(tracked_input(inputs_, j));
    }

    // Buchberger with normal (degree-first) pair selection and the
    // coprimality criterion.
    struct Pair {
        size_t i, j;
        Monomial lcm;
        long deg;
    };
    std::deque<Pair> pairs;
    auto make_pairs = [&](size_t fresh) {
        for (size_t i = 0; i < fresh; ++i) {
            const Monomial& a = basis[i].poly.leading_term().mono;
            const Monomial& b = basis[fresh].poly.leading_term().mono;
            if (Monomial::coprime(a, b)) continue;
            Monomial l = Monomial::lcm(a, b);
            long d = l.total_degree();
            pairs.push_back({i, fresh, std::move(l), d});
        }
    };
    for (size_t k = 1; k < basis.size(); ++k) make_pairs(k);

    while (!pairs.empty()) {
        auto best = pairs.begin();
        for (auto it = pairs.begin(); it != pairs.end(); ++it)
            if (it->deg < best->deg) best = it;
        Pair p = *best;
        pairs.erase(best);

        const Tracked& f = basis[p.i];
        const Tracked& g = basis[p.j];
        const Term& lf = f.poly.leading_term();
        const Term& lg = g.poly.leading_term();
        Monomial mf = lf.mono.divide_into(p.lcm);
        Monomial mg = lg.mono.divide_into(p.lcm);
        Scalar one = Scalar::one(ring.characteristic());
        Tracked s;
        s.poly = f.poly.mul_term(one / lf.coeff, mf) -
                 g.poly.mul_term(one / lg.coeff, mg);
        s.rep.assign(inputs_.size(), Polynomial::zero(ring));
        for (size_t j = 0; j < inputs_.size(); ++j)
            s.rep[j] = f.rep[j].mul_term(one / lf.coeff, mf) -
                       g.rep[j].mul_term(one / lg.coeff, mg);
        Tracked red = reduce_tracked(std::move(s), basis, order_);
        if (red.poly.is_zero()) continue;
        basis.push_back(std::move(red));
        make_pairs(basis.size() - 1);
    }

    // Minimalize: drop elements whose leading term another divides.
    std::vector<bool> keep(basis.size(), true);
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = 0; j < basis.size() && keep[i]; ++j) {
            if (i == j || !keep[j]) continue;
            if (basis[j].poly.leading_term().mono.divides(
                    basis[i].poly.leading_term().mono))
                keep[i] = false;
        }
    }
    std::vector<Tracked> minimal;
    for (size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) minimal.push_back(std::move(basis[i]));

    // Reduce tails against the other elements and normalize monic.
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Tracked> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        Tracked r = reduce_tracked(minimal[i], others, order_);
        if (r.poly.is_zero()) throw Error("reduced GB element vanished");
        Scalar inv = r.poly.leading_term().coeff.inverse();
        r.poly = r.poly.mul_scalar(inv);
        for (auto& q : r.rep) q = q.mul_scalar(inv);
        minimal[i] = std::move(r);
    }
    std::sort(minimal.begin(), minimal.end(),
              [&](const Tracked& a, const Tracked& b) {
                  return monomial_compare(a.poly.leading_term().mono,
                                          b.poly.leading_term().mono) ==
                         Ordering::greater;
              });

    for (auto& t : minimal) {
        // Each element must equal its recorded input combination.
        Polynomial check = Polynomial::zero(ring);
        for (size_t j = 0; j < inputs_.size(); ++j)
            check = check + t.rep[j] * inputs_[j];
        if (!(check == t.poly)) throw Error("GB transformation out of sync");
        basis_.push_back(std::move(t.poly));
        trans_.push_back(std::move(t.rep));
    }
}

NormalFormResult normal_form(const Polynomial& p,
                             const std::vector<Polynomial>& divisors,
                             MonomialOrder order) {
    const PolyRing& ring = p.ring();
    for (const auto& g : divisors)
        if (g.ring() != ring) throw RingMismatch("divisor over wrong ring");
    NormalFormResult res;
    res.remainder = Polynomial::zero(ring);
    res.cofactors.assign(divisors.size(), Polynomial::zero(ring));
    Polynomial work = p;
    while (!work.is_zero()) {
        const Term& lt = work.leading_term();
        bool reduced = false;
        for (size_t i = 0; i < divisors.size(); ++i) {
            if (divisors[i].is_zero()) continue;
            const Term& lg = divisors[i].leading_term();
            if (!lg.mono.divides(lt.mono)) continue;
            Scalar c = lt.coeff / lg.coeff;
            Monomial m = lg.mono.divide_into(lt.mono);
            work = work - divisors[i].mul_term(c, m);
            res.cofactors[i] =
                res.cofactors[i] + Polynomial::term(ring, c, m);
            reduced = true;
            break;
        }
        if (!reduced) {
            res.remainder =
                res.remainder + Polynomial::term(ring, lt.coeff, lt.mono);
            work = work - Polynomial::term(ring, lt.coeff, lt.mono);
        }
    }
    (void)order;
    return res;
}

NormalFormResult normal_form(const Polynomial& p, const GroebnerBasis& gb) {
    return normal_form(p, gb.generators(), gb.order());
}

MembershipResult ideal_membership(const Polynomial& p,
                                  const GroebnerBasis& gb) {
    NormalFormResult nf = normal_form(p, gb);
    if (!nf.remainder.is_zero()) return NotMember{std::move(nf.remainder)};
    const PolyRing& ring = p.ring();
    const size_t nin = gb.inputs().size();
    MembershipWitness w;
    w.cofactors.assign(nin, Polynomial::zero(ring));
    for (size_t i = 0; i < gb.generators().size(); ++i) {
        if (nf.cofactors[i].is_zero()) continue;
        for (size_t j = 0; j < nin; ++j)
            w.cofactors[j] =
                w.cofactors[j] + nf.cofactors[i] * gb.transformation(i, j);
    }
    // The witness identity is asserted on every call.
    Polynomial check = Polynomial::zero(ring);
    for (size_t j = 0; j < nin; ++j)
        check = check + w.cofactors[j] * gb.inputs()[j];
    if (!(check == p)) throw Error("membership witness identity failed");
    return w;
}

MembershipResult ideal_membership(const Polynomial& p,
                                  const std::vector<Polynomial>& gens) {
    bool all_zero = true;
    for (const auto& g : gens)
        if (!g.is_zero()) all_zero = false;
    if (gens.empty() || all_zero) {
        if (p.is_zero()) return MembershipWitness{std::vector<Polynomial>(
            gens.size(), Polynomial::zero(p.ring()))};
        return NotMember{p};
    }
    return ideal_membership(p, GroebnerBasis(gens));
}

}  // namespace dmflag
