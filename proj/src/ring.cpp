#include "dmflag/ring.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dmflag/scalar.hpp"

namespace dmflag {

PolyRing::PolyRing(std::vector<std::string> var_names, uint64_t characteristic,
                   std::vector<int> weights) {
    auto d = std::make_shared<Data>();
    std::set<std::string> seen(var_names.begin(), var_names.end());
    if (seen.size() != var_names.size())
        throw Error("ring variable names must be distinct");
    if (characteristic != 0 && !is_prime_u64(characteristic))
        throw Error("ring characteristic must be 0 or prime");
    if (characteristic >= (1ull << 31))
        throw Error("prime characteristic must be < 2^31");
    if (weights.empty()) weights.assign(var_names.size(), 1);
    if (weights.size() != var_names.size())
        throw Error("one weight per variable required");
    for (int w : weights)
        if (w < 1) throw Error("variable weights must be >= 1");
    d->vars = std::move(var_names);
    d->characteristic = characteristic;
    d->weights = std::move(weights);
    data_ = std::move(d);
}

PolyRing PolyRing::standard(int n, uint64_t characteristic) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return PolyRing(std::move(names), characteristic);
}

int PolyRing::var_index(const std::string& name) const {
    for (size_t i = 0; i < data_->vars.size(); ++i)
        if (data_->vars[i] == name) return static_cast<int>(i);
    return -1;
}

bool PolyRing::operator==(const PolyRing& o) const {
    if (data_ == o.data_) return true;
    if (!data_ || !o.data_) return false;
    return data_->vars == o.data_->vars &&
           data_->characteristic == o.data_->characteristic &&
           data_->weights == o.data_->weights;
}

std::string PolyRing::str() const {
    std::ostringstream os;
    os << (characteristic() == 0 ? "QQ" : "F" + std::to_string(characteristic()));
    os << "[";
    for (size_t i = 0; i < arity(); ++i) {
        if (i) os << ",";
        os << var_name(i);
    }
    os << "]";
    return os.str();
}

bool Monomial::is_one() const {
    return std::all_of(e_.begin(), e_.end(), [](uint32_t v) { return v == 0; });
}

long Monomial::total_degree() const {
    long d = 0;
    for (uint32_t v : e_) d += v;
    return d;
}

long Monomial::weighted_degree(const PolyRing& ring) const {
    long d = 0;
    for (size_t i = 0; i < e_.size(); ++i) d += long(e_[i]) * ring.weights()[i];
    return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
    if (arity() != o.arity()) throw ShapeMismatch("monomial arity mismatch");
    Monomial m(*this);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] += o.e_[i];
    return m;
}

bool Monomial::divides(const Monomial& o) const {
    if (arity() != o.arity()) throw ShapeMismatch("monomial arity mismatch");
    for (size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > o.e_[i]) return false;
    return true;
}

Monomial Monomial::divide_into(const Monomial& o) const {
    Monomial m(o);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] -= e_[i];
    return m;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
    if (a.arity() != b.arity()) throw ShapeMismatch("monomial arity mismatch");
    Monomial m(a);
    for (size_t i = 0; i < m.e_.size(); ++i)
        m.e_[i] = std::max(a.e_[i], b.e_[i]);
    return m;
}

bool Monomial::coprime(const Monomial& a, const Monomial& b) {
    for (size_t i = 0; i < a.e_.size(); ++i)
        if (a.e_[i] != 0 && b.e_[i] != 0) return false;
    return true;
}

Ordering monomial_compare(const Monomial& a, const Monomial& b,
                          MonomialOrder order) {
    if (a.arity() != b.arity()) throw ShapeMismatch("monomial arity mismatch");
    const size_t n = a.arity();
    if (order == MonomialOrder::lex) {
        for (size_t i = 0; i < n; ++i) {
            if (a.exp(i) != b.exp(i))
                return a.exp(i) > b.exp(i) ? Ordering::greater : Ordering::less;
        }
        return Ordering::equal;
    }
    long da = a.total_degree(), db = b.total_degree();
    if (da != db) return da > db ? Ordering::greater : Ordering::less;
    for (size_t i = n; i-- > 0;) {
        if (a.exp(i) != b.exp(i))
            return a.exp(i) < b.exp(i) ? Ordering::greater : Ordering::less;
    }
    return Ordering::equal;
}

}  // namespace dmflag
