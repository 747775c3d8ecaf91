#include "dmflag/diffmod.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <sstream>

namespace dmflag {

namespace {

void check_graded_matrix(const Matrix& m, const std::vector<int>& row_twists,
                         const std::vector<int>& col_twists, int a,
                         const char* what) {
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) {
            const Polynomial& p = m.at(r, c);
            if (p.is_zero()) continue;
            long want = long(row_twists[r]) - long(col_twists[c]) + a;
            if (!p.is_homogeneous_of_degree(want))
                throw NotHomogeneous(
                    std::string(what) + ": entry (" + std::to_string(r) + "," +
                        std::to_string(c) + ") = " + p.str() +
                        " is not homogeneous of degree " + std::to_string(want),
                    static_cast<int>(r), static_cast<int>(c));
        }
}

}  // namespace

void DifferentialModule::validate() const {
    Matrix sq = matrix_ * matrix_;
    for (size_t r = 0; r < sq.rows(); ++r)
        for (size_t c = 0; c < sq.cols(); ++c)
            if (!sq.at(r, c).is_zero())
                throw NotSquareZero("d^2 entry (" + std::to_string(r) + "," +
                                        std::to_string(c) +
                                        ") = " + sq.at(r, c).str(),
                                    static_cast<int>(r), static_cast<int>(c));
    if (graded_)
        check_graded_matrix(matrix_, module_.twists, module_.twists, degree_a_,
                            "differential");
}

DifferentialModule make_dm(GradedFreeModule module, Matrix matrix,
                           int degree_a, bool graded) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != module.rank())
        throw ShapeMismatch("differential must be square of the module rank");
    if (matrix.rows() > 0 && matrix.ring() != module.ring)
        throw RingMismatch("differential over wrong ring");
    DifferentialModule d;
    d.module_ = std::move(module);
    d.matrix_ = std::move(matrix);
    d.degree_a_ = degree_a;
    d.graded_ = graded;
    d.validate();
    return d;
}

ChainComplex::ChainComplex(std::vector<GradedFreeModule> modules,
                           std::vector<Matrix> differentials, bool graded)
    : modules_(std::move(modules)), diffs_(std::move(differentials)),
      graded_(graded) {
    if (modules_.empty()) throw ShapeMismatch("complex needs a level 0");
    if (diffs_.size() + 1 != modules_.size())
        throw ShapeMismatch("complex needs one differential per step");
    for (size_t i = 1; i < modules_.size(); ++i) {
        const Matrix& d = diffs_[i - 1];
        if (d.rows() != modules_[i - 1].rank() || d.cols() != modules_[i].rank())
            throw ShapeMismatch("complex differential shape mismatch");
        if (graded_)
            check_graded_matrix(d, modules_[i - 1].twists, modules_[i].twists,
                                0, "complex differential");
    }
    for (size_t i = 2; i < modules_.size(); ++i)
        if (!(diffs_[i - 2] * diffs_[i - 1]).is_zero())
            throw NotSquareZero("d_" + std::to_string(i - 1) + " d_" +
                                    std::to_string(i) + " != 0",
                                -1, -1);
}

size_t ChainComplex::total_rank() const {
    size_t n = 0;
    for (const auto& m : modules_) n += m.rank();
    return n;
}

FreeFlag::FreeFlag(DifferentialModule dm, std::vector<int> levels)
    : dm_(std::move(dm)), levels_(std::move(levels)) {
    if (levels_.size() != dm_.rank())
        throw ShapeMismatch("one flag level per generator");
    const Matrix& m = dm_.matrix();
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c)
            if (!m.at(r, c).is_zero() && levels_[r] >= levels_[c])
                throw PreconditionViolated(
                    "flag differential must strictly lower the level; entry (" +
                    std::to_string(r) + "," + std::to_string(c) + ")");
}

int FreeFlag::max_level() const {
    int m = 0;
    for (int l : levels_) m = std::max(m, l);
    return m;
}

std::vector<size_t> FreeFlag::generators_at_level(int level) const {
    std::vector<size_t> out;
    for (size_t g = 0; g < levels_.size(); ++g)
        if (levels_[g] == level) out.push_back(g);
    return out;
}

Matrix FreeFlag::block(int i, int j) const {
    auto rows = generators_at_level(j);
    auto cols = generators_at_level(i);
    Matrix b(dm_.ring(), rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            b.set(r, c, dm_.matrix().at(rows[r], cols[c]));
    return b;
}

HilbertVector HilbertVector::operator+(const HilbertVector& o) const {
    if (dims.size() != o.dims.size())
        throw ShapeMismatch("Hilbert vector length mismatch");
    HilbertVector r = *this;
    for (size_t i = 0; i < dims.size(); ++i) r.dims[i] += o.dims[i];
    return r;
}

std::string HilbertVector::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < dims.size(); ++i) {
        if (i) os << ",";
        os << dims[i];
    }
    os << ")";
    return os.str();
}

FreeFlag fold(const ChainComplex& c, int degree_a) {
    const PolyRing& ring = c.ring();
    GradedFreeModule mod{ring, {}};
    std::vector<int> levels;
    std::vector<size_t> offset(c.length() + 1, 0);
    for (size_t i = 0; i <= c.length(); ++i) {
        offset[i] = mod.twists.size();
        for (int t : c.level(i).twists) {
            mod.twists.push_back(t + static_cast<int>(i) * degree_a);
            levels.push_back(static_cast<int>(i));
        }
    }
    Matrix m(ring, mod.rank(), mod.rank());
    for (size_t i = 1; i <= c.length(); ++i)
        m.paste(offset[i - 1], offset[i], c.differential(i));
    return FreeFlag(make_dm(std::move(mod), std::move(m), degree_a, c.graded()),
                    std::move(levels));
}

DifferentialModule mapping_cone(const DifferentialModule& source,
                                const Polynomial& multiplier) {
    if (!source.graded())
        throw PreconditionViolated("mapping_cone needs a graded source");
    if (multiplier.ring() != source.ring())
        throw RingMismatch("cone multiplier over wrong ring");
    long mult_deg = 1;
    if (!multiplier.is_zero()) {
        auto h = multiplier.homogeneous_degree();
        if (!h)
            throw PreconditionViolated("cone multiplier must be homogeneous");
        mult_deg = *h;
    }
    const int a = source.degree();
    const int shift = a - static_cast<int>(mult_deg);
    const size_t n = source.rank();
    const PolyRing& ring = source.ring();

    GradedFreeModule mod{ring, {}};
    for (int t : source.module().twists) mod.twists.push_back(t);
    for (int t : source.module().twists) mod.twists.push_back(t + shift);

    Matrix m(ring, 2 * n, 2 * n);
    m.paste(0, 0, -source.matrix());
    m.paste(n, n, source.matrix());
    for (size_t g = 0; g < n; ++g) m.set(g, n + g, multiplier);
    return make_dm(std::move(mod), std::move(m), a, true);
}

DifferentialModule box_product(const ChainComplex& c,
                               const DifferentialModule& d) {
    if (c.ring() != d.ring()) throw RingMismatch("box product ring mismatch");
    const PolyRing& ring = d.ring();
    const int a = d.degree();
    const size_t dn = d.rank();
    const bool graded = c.graded() && d.graded();

    GradedFreeModule mod{ring, {}};
    std::vector<size_t> offset(c.length() + 1, 0);
    for (size_t i = 0; i <= c.length(); ++i) {
        offset[i] = mod.twists.size();
        for (int tb : c.level(i).twists)
            for (int tg : d.module().twists)
                mod.twists.push_back(tb + static_cast<int>(i) * a + tg);
    }
    auto idx = [&](size_t i, size_t b, size_t g) {
        return offset[i] + b * dn + g;
    };

    Matrix m(ring, mod.rank(), mod.rank());
    for (size_t i = 0; i <= c.length(); ++i) {
        const size_t bi = c.level(i).rank();
        const bool odd = i % 2 == 1;
        for (size_t b = 0; b < bi; ++b)
            for (size_t g = 0; g < dn; ++g) {
                const size_t col = idx(i, b, g);
                if (i >= 1) {
                    const Matrix& di = c.differential(i);
                    for (size_t b2 = 0; b2 < c.level(i - 1).rank(); ++b2) {
                        const Polynomial& e = di.at(b2, b);
                        if (!e.is_zero()) m.set(idx(i - 1, b2, g), col, e);
                    }
                }
                for (size_t g2 = 0; g2 < dn; ++g2) {
                    const Polynomial& e = d.matrix().at(g2, g);
                    if (!e.is_zero()) m.set(idx(i, b, g2), col, odd ? -e : e);
                }
            }
    }
    return make_dm(std::move(mod), std::move(m), a, graded);
}

DifferentialModule direct_sum(const DifferentialModule& a,
                              const DifferentialModule& b) {
    if (a.ring() != b.ring()) throw RingMismatch("direct sum ring mismatch");
    if (a.degree() != b.degree())
        throw PreconditionViolated("direct sum degree mismatch");
    GradedFreeModule mod{a.ring(), a.module().twists};
    for (int t : b.module().twists) mod.twists.push_back(t);
    Matrix m(a.ring(), a.rank() + b.rank(), a.rank() + b.rank());
    m.paste(0, 0, a.matrix());
    m.paste(a.rank(), a.rank(), b.matrix());
    return make_dm(std::move(mod), std::move(m), a.degree(),
                   a.graded() && b.graded());
}

DifferentialModule twist(const DifferentialModule& d, int t) {
    GradedFreeModule mod{d.ring(), d.module().twists};
    for (int& tw : mod.twists) tw += t;
    return make_dm(std::move(mod), d.matrix(), d.degree(), d.graded());
}

DifferentialModule change_ring(const DifferentialModule& d,
                               const PolyRing& target) {
    Matrix m(target, d.rank(), d.rank());
    for (size_t r = 0; r < d.rank(); ++r)
        for (size_t c = 0; c < d.rank(); ++c)
            m.set(r, c, change_ring(d.matrix().at(r, c), target));
    GradedFreeModule mod{target, d.module().twists};
    return make_dm(std::move(mod), std::move(m), d.degree(), d.graded());
}

bool verify_morphism(const Matrix& phi, const DifferentialModule& src,
                     const DifferentialModule& dst) {
    if (phi.rows() != dst.rank() || phi.cols() != src.rank())
        throw ShapeMismatch("morphism matrix shape mismatch");
    if (src.ring() != dst.ring()) throw RingMismatch("morphism ring mismatch");
    return dst.matrix() * phi == phi * src.matrix();
}

bool verify_isomorphism(const Matrix& phi, const DifferentialModule& src,
                        const DifferentialModule& dst) {
    if (!verify_morphism(phi, src, dst)) return false;
    Polynomial det = phi.determinant();
    return !det.is_zero() && det.is_constant();
}

bool is_minimal(const DifferentialModule& d) {
    for (size_t r = 0; r < d.rank(); ++r)
        for (size_t c = 0; c < d.rank(); ++c)
            if (!d.matrix().at(r, c).constant_coefficient().is_zero())
                return false;
    return true;
}

std::vector<Monomial> monomials_of_weighted_degree(const PolyRing& ring,
                                                   long d) {
    std::vector<Monomial> out;
    if (d < 0) return out;
    Monomial cur(ring.arity());
    // Depth-first over variables; weights are >= 1 so recursion is bounded.
    auto rec = [&](auto&& self, size_t var, long remaining) -> void {
        if (var + 1 == ring.arity()) {
            int w = ring.weights()[var];
            if (remaining % w == 0) {
                cur.exp(var) = static_cast<uint32_t>(remaining / w);
                out.push_back(cur);
                cur.exp(var) = 0;
            }
            return;
        }
        int w = ring.weights()[var];
        for (long e = 0; e * w <= remaining; ++e) {
            cur.exp(var) = static_cast<uint32_t>(e);
            self(self, var + 1, remaining - e * w);
        }
        cur.exp(var) = 0;
    };
    if (ring.arity() == 0) {
        if (d == 0) out.push_back(cur);
        return out;
    }
    rec(rec, 0, d);
    return out;
}

long graded_piece_dim(const GradedFreeModule& m, long t) {
    // dim of S in degree d for standard weights is C(d+n-1, n-1); counting
    // via enumeration keeps arbitrary weights exact.
    long total = 0;
    for (size_t g = 0; g < m.rank(); ++g) {
        long d = t + m.twists[g];
        if (d < 0) continue;
        total += static_cast<long>(
            monomials_of_weighted_degree(m.ring, d).size());
    }
    return total;
}

SliceBasis slice_basis(const GradedFreeModule& m, long t) {
    SliceBasis b;
    for (size_t g = 0; g < m.rank(); ++g) {
        long d = t + m.twists[g];
        if (d < 0) continue;
        for (Monomial& mono : monomials_of_weighted_degree(m.ring, d)) {
            b.index[{g, mono.exps()}] = static_cast<int>(b.elems.size());
            b.elems.emplace_back(g, std::move(mono));
        }
    }
    return b;
}

SparseMat degree_slice(const Matrix& mat, const GradedFreeModule& src,
                       const GradedFreeModule& dst, long t, int a,
                       const SliceBasis& src_basis,
                       const SliceBasis& dst_basis) {
    (void)t;
    (void)a;
    SparseMat out(src.ring.characteristic(), dst_basis.elems.size(),
                  src_basis.elems.size());
    for (size_t col = 0; col < src_basis.elems.size(); ++col) {
        const auto& [g, mono] = src_basis.elems[col];
        for (size_t r = 0; r < dst.rank(); ++r) {
            const Polynomial& e = mat.at(r, g);
            if (e.is_zero()) continue;
            for (const Term& term : e.terms()) {
                Monomial target = mono * term.mono;
                auto it = dst_basis.index.find({r, target.exps()});
                if (it == dst_basis.index.end())
                    throw Error("degree slice landed outside target basis");
                out.add(static_cast<size_t>(it->second), col, term.coeff);
            }
        }
    }
    return out;
}

namespace {

long slice_rank(const DifferentialModule& d, long t) {
    SliceBasis src = slice_basis(d.module(), t);
    if (src.elems.empty()) return 0;
    SliceBasis dst = slice_basis(d.module(), t + d.degree());
    SparseMat m = degree_slice(d.matrix(), d.module(), d.module(), t,
                               d.degree(), src, dst);
    return static_cast<long>(m.rank());
}

}  // namespace

HilbertVector homology_hilbert(const DifferentialModule& d, int max_deg,
                               int jobs) {
    if (!d.graded()) throw UngradedInput("homology needs a graded module");
    if (max_deg < 0) throw PreconditionViolated("max_deg must be >= 0");
    const int a = d.degree();

    // Ranks needed: rank(d_t) for t in 0..max_deg and t in -a..max_deg-a.
    std::set<long> degrees;
    for (long t = 0; t <= max_deg; ++t) {
        degrees.insert(t);
        degrees.insert(t - a);
    }
    std::vector<long> degree_list(degrees.begin(), degrees.end());
    std::vector<long> ranks(degree_list.size(), 0);

    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i)
            ranks[i] = slice_rank(d, degree_list[i]);
    };
    if (jobs <= 1 || degree_list.size() <= 1) {
        work(0, degree_list.size());
    } else {
        size_t nthreads = std::min<size_t>(jobs, degree_list.size());
        std::vector<std::future<void>> fs;
        size_t chunk = (degree_list.size() + nthreads - 1) / nthreads;
        for (size_t k = 0; k < nthreads; ++k) {
            size_t lo = k * chunk;
            size_t hi = std::min(degree_list.size(), lo + chunk);
            if (lo >= hi) break;
            fs.push_back(std::async(std::launch::async, work, lo, hi));
        }
        for (auto& f : fs) f.get();
    }
    auto rank_at = [&](long t) {
        auto it = std::lower_bound(degree_list.begin(), degree_list.end(), t);
        return ranks[static_cast<size_t>(it - degree_list.begin())];
    };

    HilbertVector h;
    h.dims.resize(max_deg + 1, 0);
    for (long t = 0; t <= max_deg; ++t) {
        long dim = graded_piece_dim(d.module(), t);
        h.dims[t] = dim - rank_at(t) - rank_at(t - a);
    }
    return h;
}

int default_max_deg(const DifferentialModule& d) {
    long s = 0;
    for (int t : d.module().twists) s += std::abs(t);
    long v = 2 * s + 2 * d.degree() + 4;
    return static_cast<int>(std::max(v, 0L));
}

}  // namespace dmflag
