#ifndef DMFLAG_SCALAR_HPP
#define DMFLAG_SCALAR_HPP

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "dmflag/error.hpp"

namespace dmflag {

// Field scalar: an exact rational (characteristic 0) or a residue mod a
// prime p. The characteristic travels with the value so mixed-field
// arithmetic is caught immediately.
class Scalar {
public:
    Scalar() : p_(0), r_(0) {}

    static Scalar zero(uint64_t p) { return Scalar(p, 0); }
    static Scalar one(uint64_t p) {
        Scalar s(p, p == 0 ? 0 : 1);
        if (p == 0) s.q_ = 1;
        return s;
    }

    static Scalar from_int(uint64_t p, long v) {
        Scalar s(p, 0);
        if (p == 0) {
            s.q_ = v;
        } else {
            long m = v % static_cast<long>(p);
            if (m < 0) m += static_cast<long>(p);
            s.r_ = static_cast<uint64_t>(m);
        }
        return s;
    }

    static Scalar from_mpq(mpq_class q) {
        Scalar s(0, 0);
        s.q_ = std::move(q);
        s.q_.canonicalize();
        return s;
    }

    // Parses "n" or "n/d" (base 10). For p > 0, "n/d" means n * d^-1 mod p.
    static Scalar parse(uint64_t p, const std::string& text);

    uint64_t characteristic() const { return p_; }
    bool is_zero() const { return p_ == 0 ? q_ == 0 : r_ == 0; }
    bool is_one() const { return p_ == 0 ? q_ == 1 : r_ == 1; }

    const mpq_class& rational() const {
        if (p_ != 0) throw Error("rational() on a mod-p scalar");
        return q_;
    }
    uint64_t residue() const {
        if (p_ == 0) throw Error("residue() on a rational scalar");
        return r_;
    }

    Scalar operator-() const {
        Scalar s(*this);
        if (p_ == 0)
            s.q_ = -s.q_;
        else if (s.r_ != 0)
            s.r_ = p_ - s.r_;
        return s;
    }

    Scalar& operator+=(const Scalar& o) {
        check(o);
        if (p_ == 0) {
            q_ += o.q_;
        } else {
            r_ += o.r_;
            if (r_ >= p_) r_ -= p_;
        }
        return *this;
    }
    Scalar& operator-=(const Scalar& o) { return *this += -o; }
    Scalar& operator*=(const Scalar& o) {
        check(o);
        if (p_ == 0) {
            q_ *= o.q_;
        } else {
            // p < 2^31 so the product fits in 64 bits.
            r_ = (r_ * o.r_) % p_;
        }
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

    Scalar inverse() const;
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        return a * b.inverse();
    }

    bool operator==(const Scalar& o) const {
        return p_ == o.p_ && (p_ == 0 ? q_ == o.q_ : r_ == o.r_);
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // True for +-1 (handy as an elimination-pivot preference).
    bool is_unit_int() const {
        if (p_ != 0) return r_ != 0;
        return q_ == 1 || q_ == -1;
    }

    std::string str() const;

private:
    Scalar(uint64_t p, uint64_t r) : p_(p), r_(r) {}
    void check(const Scalar& o) const {
        if (p_ != o.p_) throw Error("scalar characteristic mismatch");
    }

    uint64_t p_;   // 0 = rationals, otherwise an odd-sized prime < 2^31
    mpq_class q_;  // used when p_ == 0
    uint64_t r_;   // used when p_ != 0
};

bool is_prime_u64(uint64_t n);

}  // namespace dmflag

#endif
