#ifndef DMFLAG_RING_HPP
#define DMFLAG_RING_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dmflag/error.hpp"

namespace dmflag {

enum class MonomialOrder { grevlex, lex };
enum class Ordering { less = -1, equal = 0, greater = 1 };

// A multivariate polynomial ring k[x_1..x_n] where k is Q (characteristic 0)
// or a prime field F_p. Each variable carries a positive grading weight
// (default 1). Immutable; cheap to copy.
class PolyRing {
public:
    PolyRing() = default;
    PolyRing(std::vector<std::string> var_names, uint64_t characteristic = 0,
             std::vector<int> weights = {});

    // k[x1..xn] with the given characteristic.
    static PolyRing standard(int n, uint64_t characteristic = 0);

    size_t arity() const { return data_->vars.size(); }
    uint64_t characteristic() const { return data_->characteristic; }
    const std::vector<std::string>& var_names() const { return data_->vars; }
    const std::vector<int>& weights() const { return data_->weights; }
    const std::string& var_name(size_t i) const { return data_->vars.at(i); }

    // Index of a variable name, or -1.
    int var_index(const std::string& name) const;

    bool operator==(const PolyRing& o) const;
    bool operator!=(const PolyRing& o) const { return !(*this == o); }

    std::string str() const;

private:
    struct Data {
        std::vector<std::string> vars;
        uint64_t characteristic = 0;
        std::vector<int> weights;
    };
    std::shared_ptr<const Data> data_;
};

// Exponent vector. Length always equals the ring arity of whatever
// polynomial holds it.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(size_t arity) : e_(arity, 0) {}
    explicit Monomial(std::vector<uint32_t> exps) : e_(std::move(exps)) {}

    size_t arity() const { return e_.size(); }
    uint32_t exp(size_t i) const { return e_[i]; }
    uint32_t& exp(size_t i) { return e_[i]; }
    const std::vector<uint32_t>& exps() const { return e_; }

    bool is_one() const;
    long total_degree() const;
    long weighted_degree(const PolyRing& ring) const;

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    // Quotient o/this per component; caller guarantees divisibility.
    Monomial divide_into(const Monomial& o) const;
    static Monomial lcm(const Monomial& a, const Monomial& b);
    static bool coprime(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& o) const { return e_ == o.e_; }
    bool operator!=(const Monomial& o) const { return e_ != o.e_; }

private:
    std::vector<uint32_t> e_;
};

// Total order on monomials of equal arity. grevlex: higher total degree
// wins; ties broken by the *smaller* trailing exponent difference. lex:
// leftmost differing exponent wins.
Ordering monomial_compare(const Monomial& a, const Monomial& b,
                          MonomialOrder order = MonomialOrder::grevlex);

}  // namespace dmflag

#endif
