#include "dmflag/scalar.hpp"

namespace dmflag {

Scalar Scalar::parse(uint64_t p, const std::string& text) {
    auto slash = text.find('/');
    try {
        if (p == 0) {
            mpq_class q(text, 10);
            q.canonicalize();
            return from_mpq(q);
        }
        if (slash == std::string::npos) {
            mpz_class n(text, 10);
            mpz_class m = n % static_cast<unsigned long>(p);
            if (m < 0) m += static_cast<unsigned long>(p);
            Scalar s = zero(p);
            s.r_ = m.get_ui();
            return s;
        }
        Scalar num = parse(p, text.substr(0, slash));
        Scalar den = parse(p, text.substr(slash + 1));
        return num / den;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad scalar literal: " + text);
    }
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error("division by zero scalar");
    if (p_ == 0) {
        Scalar s = *this;
        s.q_ = 1 / q_;
        return s;
    }
    // Extended Euclid on (r, p).
    int64_t a = static_cast<int64_t>(r_), m = static_cast<int64_t>(p_);
    int64_t x0 = 1, x1 = 0, b = m;
    while (b != 0) {
        int64_t q = a / b;
        int64_t t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    if (a != 1) throw Error("noninvertible residue (modulus not prime?)");
    x0 %= m;
    if (x0 < 0) x0 += m;
    Scalar s = *this;
    s.r_ = static_cast<uint64_t>(x0);
    return s;
}

std::string Scalar::str() const {
    if (p_ == 0) return q_.get_str();
    return std::to_string(r_);
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace dmflag
