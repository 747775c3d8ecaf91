#include "dmflag/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace dmflag {

namespace {

struct TermLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return monomial_compare(a, b) == Ordering::less;
    }
};

void require_same_ring(const Polynomial& a, const Polynomial& b) {
    if (a.ring() != b.ring())
        throw RingMismatch("polynomials over different rings");
}

}  // namespace

Polynomial Polynomial::zero(const PolyRing& ring) {
    Polynomial p;
    p.ring_ = ring;
    return p;
}

Polynomial Polynomial::constant(const PolyRing& ring, Scalar c) {
    return term(ring, std::move(c), Monomial(ring.arity()));
}

Polynomial Polynomial::constant(const PolyRing& ring, long c) {
    return constant(ring, Scalar::from_int(ring.characteristic(), c));
}

Polynomial Polynomial::variable(const PolyRing& ring, size_t i) {
    if (i >= ring.arity()) throw Error("variable index out of range");
    Monomial m(ring.arity());
    m.exp(i) = 1;
    return term(ring, Scalar::one(ring.characteristic()), std::move(m));
}

Polynomial Polynomial::term(const PolyRing& ring, Scalar c, Monomial m) {
    Polynomial p;
    p.ring_ = ring;
    if (m.arity() != ring.arity()) throw ShapeMismatch("monomial arity vs ring");
    if (!c.is_zero()) p.terms_.push_back({std::move(c), std::move(m)});
    return p;
}

Polynomial Polynomial::from_terms(const PolyRing& ring,
                                  std::vector<Term> terms) {
    std::map<Monomial, Scalar, TermLess> acc;
    for (auto& t : terms) {
        if (t.mono.arity() != ring.arity())
            throw ShapeMismatch("monomial arity vs ring");
        auto it = acc.find(t.mono);
        if (it == acc.end())
            acc.emplace(std::move(t.mono), std::move(t.coeff));
        else
            it->second += t.coeff;
    }
    Polynomial p;
    p.ring_ = ring;
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (!it->second.is_zero()) p.terms_.push_back({it->second, it->first});
    return p;
}

const Term& Polynomial::leading_term() const {
    if (terms_.empty()) throw Error("leading term of zero polynomial");
    return terms_.front();
}

long Polynomial::degree() const {
    long d = -1;
    for (const auto& t : terms_)
        d = std::max(d, t.mono.weighted_degree(ring_));
    return d;
}

Scalar Polynomial::constant_coefficient() const {
    for (const auto& t : terms_)
        if (t.mono.is_one()) return t.coeff;
    return Scalar::zero(ring_.characteristic());
}

Polynomial Polynomial::operator-() const {
    Polynomial p(*this);
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    require_same_ring(*this, o);
    Polynomial r;
    r.ring_ = ring_;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        Ordering c = monomial_compare(terms_[i].mono, o.terms_[j].mono);
        if (c == Ordering::greater) {
            r.terms_.push_back(terms_[i++]);
        } else if (c == Ordering::less) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            Scalar s = terms_[i].coeff + o.terms_[j].coeff;
            if (!s.is_zero()) r.terms_.push_back({std::move(s), terms_[i].mono});
            ++i, ++j;
        }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require_same_ring(*this, o);
    std::vector<Term> prods;
    prods.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_)
            prods.push_back({a.coeff * b.coeff, a.mono * b.mono});
    return from_terms(ring_, std::move(prods));
}

Polynomial Polynomial::mul_term(const Scalar& c, const Monomial& m) const {
    if (c.is_zero()) return zero(ring_);
    Polynomial r;
    r.ring_ = ring_;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.coeff * c, t.mono * m});
    return r;
}

Polynomial Polynomial::mul_scalar(const Scalar& c) const {
    return mul_term(c, Monomial(ring_.arity()));
}

bool Polynomial::operator==(const Polynomial& o) const {
    if (ring_ != o.ring_) return false;
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].coeff != o.terms_[i].coeff ||
            terms_[i].mono != o.terms_[i].mono)
            return false;
    return true;
}

std::optional<long> Polynomial::homogeneous_degree() const {
    if (terms_.empty())
        throw Error("homogeneous_degree of the zero polynomial is undefined");
    long d = terms_[0].mono.weighted_degree(ring_);
    for (const auto& t : terms_)
        if (t.mono.weighted_degree(ring_) != d) return std::nullopt;
    return d;
}

bool Polynomial::is_homogeneous_of_degree(long d) const {
    if (terms_.empty()) return true;
    auto h = homogeneous_degree();
    return h && *h == d;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    const uint64_t p = ring_.characteristic();
    for (const auto& t : terms_) {
        Scalar c = t.coeff;
        bool neg = false;
        if (p == 0 && c.rational() < 0) {
            neg = true;
            c = -c;
        }
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        const bool unit = c.is_one();
        if (!unit || t.mono.is_one()) os << c.str();
        bool printed_var = false;
        for (size_t i = 0; i < t.mono.arity(); ++i) {
            if (t.mono.exp(i) == 0) continue;
            if (!unit || printed_var) os << "*";
            printed_var = true;
            os << ring_.var_name(i);
            if (t.mono.exp(i) > 1) os << "^" << t.mono.exp(i);
        }
    }
    return os.str();
}

namespace {

// Recursive-descent parser for the term grammar. Accepts an optional
// leading sign per term, integer or rational coefficients, and
// `*`-separated `name^exp` powers. `**` is rejected.
class PolyParser {
public:
    PolyParser(const PolyRing& ring, const std::string& text)
        : ring_(ring), s_(text) {}

    Polynomial run() {
        std::vector<Term> terms;
        skip_ws();
        if (eof()) throw ParseError("empty polynomial");
        bool neg = accept_sign();
        terms.push_back(parse_term(neg));
        for (;;) {
            skip_ws();
            if (eof()) break;
            char c = s_[pos_];
            if (c != '+' && c != '-')
                throw ParseError("expected '+' or '-' near: " + rest());
            ++pos_;
            terms.push_back(parse_term(c == '-'));
        }
        return Polynomial::from_terms(ring_, std::move(terms));
    }

private:
    bool eof() const { return pos_ >= s_.size(); }
    std::string rest() const { return s_.substr(pos_); }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool accept_sign() {
        skip_ws();
        if (!eof() && (s_[pos_] == '+' || s_[pos_] == '-'))
            return s_[pos_++] == '-';
        return false;
    }

    Term parse_term(bool negative) {
        skip_ws();
        if (eof()) throw ParseError("dangling sign");
        Scalar coeff = Scalar::one(ring_.characteristic());
        Monomial mono(ring_.arity());
        bool have_factor = false;
        for (;;) {
            skip_ws();
            if (eof()) break;
            char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                coeff *= parse_number();
            } else if (std::isalpha(static_cast<unsigned char>(c)) ||
                       c == '_') {
                parse_power(mono);
            } else {
                break;
            }
            have_factor = true;
            skip_ws();
            if (!eof() && s_[pos_] == '*') {
                ++pos_;
                continue;
            }
            break;
        }
        if (!have_factor) throw ParseError("expected term near: " + rest());
        if (negative) coeff = -coeff;
        return {std::move(coeff), std::move(mono)};
    }

    Scalar parse_number() {
        size_t start = pos_;
        while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        std::string num = s_.substr(start, pos_ - start);
        skip_ws();
        if (!eof() && s_[pos_] == '/') {
            size_t save = pos_++;
            skip_ws();
            if (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                size_t ds = pos_;
                while (!eof() &&
                       std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
                return Scalar::parse(ring_.characteristic(),
                                     num + "/" + s_.substr(ds, pos_ - ds));
            }
            pos_ = save;  // a '/' not followed by digits is an error later
        }
        return Scalar::parse(ring_.characteristic(), num);
    }

    void parse_power(Monomial& mono) {
        size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                          s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        int idx = ring_.var_index(name);
        if (idx < 0) throw ParseError("unknown variable: " + name);
        uint32_t e = 1;
        skip_ws();
        if (!eof() && s_[pos_] == '^') {
            ++pos_;
            skip_ws();
            if (eof() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw ParseError("expected exponent after '^'");
            size_t ds = pos_;
            while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            e = static_cast<uint32_t>(std::stoul(s_.substr(ds, pos_ - ds)));
        }
        mono.exp(static_cast<size_t>(idx)) += e;
    }

    const PolyRing& ring_;
    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const PolyRing& ring, const std::string& text) {
    return PolyParser(ring, text).run();
}

std::optional<Polynomial> divide_exact(const Polynomial& p,
                                       const Polynomial& q) {
    if (q.is_zero()) return std::nullopt;
    if (p.is_zero()) return Polynomial::zero(p.ring());
    Polynomial rem = p;
    std::vector<Term> quot;
    const Term& lq = q.leading_term();
    while (!rem.is_zero()) {
        const Term& lr = rem.leading_term();
        if (!lq.mono.divides(lr.mono)) return std::nullopt;
        Scalar c = lr.coeff / lq.coeff;
        Monomial m = lq.mono.divide_into(lr.mono);
        rem = rem - q.mul_term(c, m);
        quot.push_back({std::move(c), std::move(m)});
    }
    return Polynomial::from_terms(p.ring(), std::move(quot));
}

Polynomial change_ring(const Polynomial& p, const PolyRing& target) {
    if (p.ring() == target) return p;
    if (p.ring().characteristic() != target.characteristic())
        throw RingMismatch("change_ring across characteristics");
    std::vector<int> where(p.ring().arity());
    for (size_t i = 0; i < p.ring().arity(); ++i) {
        where[i] = target.var_index(p.ring().var_name(i));
    }
    std::vector<Term> terms;
    for (const Term& t : p.terms()) {
        Monomial m(target.arity());
        for (size_t i = 0; i < p.ring().arity(); ++i) {
            if (t.mono.exp(i) == 0) continue;
            if (where[i] < 0)
                throw RingMismatch("variable " + p.ring().var_name(i) +
                                   " missing from target ring");
            m.exp(static_cast<size_t>(where[i])) += t.mono.exp(i);
        }
        terms.push_back({t.coeff, std::move(m)});
    }
    return Polynomial::from_terms(target, std::move(terms));
}

Polynomial poly_arith(const Polynomial& a, const Polynomial& b, PolyOp op) {
    switch (op) {
        case PolyOp::add: return a + b;
        case PolyOp::sub: return a - b;
        case PolyOp::mul: return a * b;
    }
    throw Error("bad PolyOp");
}

}  // namespace dmflag
