#ifndef DMFLAG_POLY_HPP
#define DMFLAG_POLY_HPP

#include <optional>
#include <string>
#include <vector>

#include "dmflag/ring.hpp"
#include "dmflag/scalar.hpp"

namespace dmflag {

struct Term {
    Scalar coeff;
    Monomial mono;
};

// Multivariate polynomial in canonical form: nonzero coefficients only,
// terms strictly decreasing in grevlex. Immutable value type.
class Polynomial {
public:
    Polynomial() = default;

    static Polynomial zero(const PolyRing& ring);
    static Polynomial constant(const PolyRing& ring, Scalar c);
    static Polynomial constant(const PolyRing& ring, long c);
    static Polynomial variable(const PolyRing& ring, size_t i);
    static Polynomial term(const PolyRing& ring, Scalar c, Monomial m);
    // Builds canonical form from arbitrary terms (merges, drops zeros).
    static Polynomial from_terms(const PolyRing& ring, std::vector<Term> terms);

    const PolyRing& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
    }
    size_t term_count() const { return terms_.size(); }

    const Term& leading_term() const;
    // Max weighted degree over terms; -1 for the zero polynomial.
    long degree() const;
    Scalar constant_coefficient() const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial mul_term(const Scalar& c, const Monomial& m) const;
    Polynomial mul_scalar(const Scalar& c) const;

    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Weighted degree when all terms agree on it, std::nullopt otherwise.
    // Throws on the zero polynomial (callers treat 0 as homogeneous of
    // every degree).
    std::optional<long> homogeneous_degree() const;
    bool is_homogeneous_of_degree(long d) const;

    // Canonical text form: `3*x1^2*x2 - x3`. parse() accepts the same
    // grammar, whitespace-insensitively.
    std::string str() const;
    static Polynomial parse(const PolyRing& ring, const std::string& text);

private:
    PolyRing ring_;
    std::vector<Term> terms_;
};

// Exact quotient p/q, or std::nullopt when q does not divide p.
std::optional<Polynomial> divide_exact(const Polynomial& p,
                                       const Polynomial& q);

// Reinterprets p over `target`, matching variables by name. Requires the
// same characteristic and every used variable to exist in the target.
Polynomial change_ring(const Polynomial& p, const PolyRing& target);

enum class PolyOp { add, sub, mul };
Polynomial poly_arith(const Polynomial& a, const Polynomial& b, PolyOp op);

}  // namespace dmflag

#endif
