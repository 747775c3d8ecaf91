#include "dmflag/exterior.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace dmflag {

int set_size(IndexSet s) { return std::popcount(s); }

IndexSet full_set(int n) {
    if (n < 0 || n > 62) throw Error("exterior rank must be in [0, 62]");
    return n == 0 ? 0 : ((IndexSet(1) << n) - 1);
}

std::vector<IndexSet> subsets_of_size(int n, int k) {
    std::vector<IndexSet> out;
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    for (;;) {
        IndexSet s = 0;
        for (int v : idx) s |= IndexSet(1) << (v - 1);
        out.push_back(s);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - (k - 1 - pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

std::vector<IndexSet> nonempty_subsets(int n) {
    std::vector<IndexSet> out;
    for (int k = 1; k <= n; ++k)
        for (IndexSet s : subsets_of_size(n, k)) out.push_back(s);
    return out;
}

std::string index_set_str(IndexSet s) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (int i = 0; i < 62; ++i) {
        if (!(s >> i & 1)) continue;
        if (!first) os << ",";
        first = false;
        os << (i + 1);
    }
    os << "}";
    return os.str();
}

IndexSet parse_index_set(const std::string& text, int n) {
    IndexSet s = 0;
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '{')
        throw ParseError("index set must start with '{': " + text);
    ++pos;
    for (;;) {
        skip_ws();
        if (pos < text.size() && text[pos] == '}') {
            ++pos;
            break;
        }
        size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (start == pos) throw ParseError("expected index in set: " + text);
        int v = std::stoi(text.substr(start, pos - start));
        if (v < 1 || v > n) throw ParseError("index out of range: " + text);
        if (s >> (v - 1) & 1) throw ParseError("repeated index: " + text);
        s |= IndexSet(1) << (v - 1);
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
            ++pos;
            continue;
        }
    }
    skip_ws();
    if (pos != text.size()) throw ParseError("trailing text after set: " + text);
    return s;
}

int shuffle_sign(IndexSet s, IndexSet t) {
    if (s & t) throw Error("shuffle_sign on non-disjoint sets");
    int inversions = 0;
    IndexSet rem = s;
    while (rem) {
        int i = std::countr_zero(rem);
        rem &= rem - 1;
        IndexSet below = (i == 0) ? 0 : ((IndexSet(1) << i) - 1);
        inversions += std::popcount(t & below);
    }
    return inversions % 2 == 0 ? 1 : -1;
}

int complement_sign(IndexSet I, int n) {
    IndexSet full = full_set(n);
    if (I & ~full) throw Error("complement_sign: subset exceeds [n]");
    return shuffle_sign(I, full & ~I);
}

ExteriorElement::ExteriorElement(const PolyRing& ring, int n)
    : ring_(ring), n_(n) {
    full_set(n);  // range check
}

ExteriorElement ExteriorElement::basis(const PolyRing& ring, int n,
                                       IndexSet I) {
    ExteriorElement e(ring, n);
    e.add_term(I, Polynomial::constant(ring, 1));
    return e;
}

Polynomial ExteriorElement::coefficient(IndexSet I) const {
    auto it = coeffs_.find(I);
    return it == coeffs_.end() ? Polynomial::zero(ring_) : it->second;
}

void ExteriorElement::add_term(IndexSet I, const Polynomial& c) {
    if (I & ~full_set(n_)) throw Error("index set exceeds [n]");
    if (c.ring() != ring_) throw RingMismatch("exterior coefficient ring");
    if (c.is_zero()) return;
    auto [it, fresh] = coeffs_.emplace(I, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

ExteriorElement ExteriorElement::operator+(const ExteriorElement& o) const {
    if (ring_ != o.ring_ || n_ != o.n_)
        throw RingMismatch("exterior element mismatch");
    ExteriorElement r(*this);
    for (const auto& [I, c] : o.coeffs_) r.add_term(I, c);
    return r;
}

ExteriorElement ExteriorElement::operator-() const {
    ExteriorElement r(*this);
    for (auto& [I, c] : r.coeffs_) c = -c;
    return r;
}

ExteriorElement ExteriorElement::mul_poly(const Polynomial& p) const {
    ExteriorElement r(ring_, n_);
    for (const auto& [I, c] : coeffs_) r.add_term(I, c * p);
    return r;
}

bool ExteriorElement::operator==(const ExteriorElement& o) const {
    return ring_ == o.ring_ && n_ == o.n_ && coeffs_ == o.coeffs_;
}

int ExteriorElement::weight() const {
    if (coeffs_.empty()) return 0;
    int w = set_size(coeffs_.begin()->first);
    for (const auto& [I, c] : coeffs_)
        if (set_size(I) != w) return -1;
    return w;
}

std::string ExteriorElement::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [I, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*e" << index_set_str(I);
    }
    return os.str();
}

DualElement::DualElement(const PolyRing& ring, int n, int weight)
    : ring_(ring), n_(n), weight_(weight) {
    full_set(n);
    if (weight < 0 || weight > n) throw Error("dual weight out of range");
}

DualElement DualElement::basis(const PolyRing& ring, int n, IndexSet I) {
    DualElement f(ring, n, set_size(I));
    f.add_term(I, Polynomial::constant(ring, 1));
    return f;
}

Polynomial DualElement::coefficient(IndexSet I) const {
    auto it = coeffs_.find(I);
    return it == coeffs_.end() ? Polynomial::zero(ring_) : it->second;
}

void DualElement::add_term(IndexSet I, const Polynomial& c) {
    if (I & ~full_set(n_)) throw Error("index set exceeds [n]");
    if (set_size(I) != weight_)
        throw Error("dual element key size must equal its weight");
    if (c.ring() != ring_) throw RingMismatch("dual coefficient ring");
    if (c.is_zero()) return;
    auto [it, fresh] = coeffs_.emplace(I, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

DualElement DualElement::operator+(const DualElement& o) const {
    if (ring_ != o.ring_ || n_ != o.n_ || weight_ != o.weight_)
        throw RingMismatch("dual element mismatch");
    DualElement r(*this);
    for (const auto& [I, c] : o.coeffs_) r.add_term(I, c);
    return r;
}

DualElement DualElement::operator-() const {
    DualElement r(*this);
    for (auto& [I, c] : r.coeffs_) c = -c;
    return r;
}

DualElement DualElement::mul_poly(const Polynomial& p) const {
    DualElement r(ring_, n_, weight_);
    for (const auto& [I, c] : coeffs_) r.add_term(I, c * p);
    return r;
}

bool DualElement::operator==(const DualElement& o) const {
    return ring_ == o.ring_ && n_ == o.n_ && weight_ == o.weight_ &&
           coeffs_ == o.coeffs_;
}

std::string DualElement::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [I, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        if (c.is_constant() && c.constant_coefficient().is_one())
            os << "e" << index_set_str(I);
        else if (c.term_count() == 1)
            os << c.str() << "*e" << index_set_str(I);
        else
            os << "(" << c.str() << ")*e" << index_set_str(I);
    }
    return os.str();
}

DualElement DualElement::parse(const PolyRing& ring, int n,
                               const std::string& text) {
    // Terms separated by top-level + and -; each term is
    // [coefficient *] e{...} with the coefficient possibly parenthesized.
    std::vector<std::pair<std::string, bool>> parts;  // text, negated
    size_t pos = 0;
    int depth = 0;
    bool neg = false;
    std::string cur;
    auto flush = [&] {
        if (cur.find_first_not_of(" \t") != std::string::npos)
            parts.emplace_back(cur, neg);
        cur.clear();
    };
    for (; pos < text.size(); ++pos) {
        char ch = text[pos];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == '+' || ch == '-')) {
            // A sign starts a new term unless it is inside a coefficient
            // (which only happens inside parentheses here).
            flush();
            neg = (ch == '-');
            continue;
        }
        cur += ch;
    }
    flush();
    if (parts.empty()) throw ParseError("empty dual element");

    int weight = -1;
    DualElement out(ring, n, 0);
    bool first_term = true;
    for (auto& [term, negated] : parts) {
        size_t e = term.find("e{");
        if (e == std::string::npos)
            throw ParseError("dual term needs e{...}: " + term);
        std::string coeff_text = term.substr(0, e);
        size_t close = term.find('}', e);
        if (close == std::string::npos)
            throw ParseError("unterminated index set: " + term);
        std::string set_text = term.substr(e + 1, close - e);  // "{...}"
        std::string tail = term.substr(close + 1);
        if (tail.find_first_not_of(" \t") != std::string::npos)
            throw ParseError("trailing text in dual term: " + term);
        IndexSet I = parse_index_set(set_text, n);
        // Trim the trailing '*' of the coefficient if present.
        size_t last = coeff_text.find_last_not_of(" \t");
        if (last != std::string::npos && coeff_text[last] == '*')
            coeff_text = coeff_text.substr(0, last);
        // Strip one outer parenthesis pair.
        size_t b = coeff_text.find_first_not_of(" \t");
        size_t e2 = coeff_text.find_last_not_of(" \t");
        if (b != std::string::npos && coeff_text[b] == '(' &&
            coeff_text[e2] == ')')
            coeff_text = coeff_text.substr(b + 1, e2 - b - 1);
        Polynomial c =
            coeff_text.find_first_not_of(" \t") == std::string::npos
                ? Polynomial::constant(ring, 1)
                : Polynomial::parse(ring, coeff_text);
        if (negated) c = -c;
        if (first_term) {
            weight = set_size(I);
            out = DualElement(ring, n, weight);
            first_term = false;
        }
        out.add_term(I, c);
    }
    return out;
}

ExteriorElement wedge(const ExteriorElement& a, const ExteriorElement& b) {
    if (a.ring() != b.ring() || a.n() != b.n())
        throw RingMismatch("wedge operand mismatch");
    ExteriorElement r(a.ring(), a.n());
    for (const auto& [I, p] : a.coefficients())
        for (const auto& [J, q] : b.coefficients()) {
            if (I & J) continue;
            int sgn = shuffle_sign(I, J);
            Polynomial c = p * q;
            r.add_term(I | J, sgn > 0 ? c : -c);
        }
    return r;
}

ExteriorElement contract(const DualElement& f, const ExteriorElement& a) {
    if (f.ring() != a.ring() || f.n() != a.n())
        throw RingMismatch("contraction operand mismatch");
    ExteriorElement r(a.ring(), a.n());
    for (const auto& [S, p] : f.coefficients())
        for (const auto& [I, q] : a.coefficients()) {
            if ((S & I) != S) continue;
            int sgn = shuffle_sign(S, I & ~S);
            Polynomial c = p * q;
            r.add_term(I & ~S, sgn > 0 ? c : -c);
        }
    return r;
}

DualElement dual_wedge(const DualElement& a, const DualElement& b) {
    if (a.ring() != b.ring() || a.n() != b.n())
        throw RingMismatch("dual wedge operand mismatch");
    if (a.weight() + b.weight() > a.n())
        return DualElement(a.ring(), a.n(), 0);  // zero in /\^{>n}
    DualElement r(a.ring(), a.n(), a.weight() + b.weight());
    for (const auto& [I, p] : a.coefficients())
        for (const auto& [J, q] : b.coefficients()) {
            if (I & J) continue;
            int sgn = shuffle_sign(I, J);
            Polynomial c = p * q;
            r.add_term(I | J, sgn > 0 ? c : -c);
        }
    return r;
}

bool dual_compose_is_zero(const DualElement& f, const DualElement& g) {
    if (f.ring() != g.ring() || f.n() != g.n())
        throw RingMismatch("dual compose operand mismatch");
    const int n = f.n();
    for (int k = f.weight() + g.weight(); k <= n; ++k)
        for (IndexSet I : subsets_of_size(n, k)) {
            ExteriorElement x =
                contract(f, contract(g, ExteriorElement::basis(f.ring(), n, I)));
            if (!x.is_zero()) return false;
        }
    return true;
}

}  // namespace dmflag
