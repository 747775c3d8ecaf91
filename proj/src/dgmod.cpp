#include "dmflag/dgmod.hpp"

#include <algorithm>
#include <atomic>
#include <future>

namespace dmflag {

namespace {

std::vector<Polynomial> zero_vec(const PolyRing& ring, size_t n) {
    return std::vector<Polynomial>(n, Polynomial::zero(ring));
}

std::vector<Polynomial> vadd(std::vector<Polynomial> a,
                             const std::vector<Polynomial>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] + b[i];
    return a;
}

std::vector<Polynomial> vmul(const Polynomial& p,
                             const std::vector<Polynomial>& v) {
    std::vector<Polynomial> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(p * q);
    return out;
}

bool vzero(const std::vector<Polynomial>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Polynomial& p) { return p.is_zero(); });
}

int koszul_rank_of(const ChainComplex& c) {
    int n = static_cast<int>(c.level(1).rank());
    for (size_t k = 0; k <= c.length(); ++k)
        if (c.level(k).rank() != subsets_of_size(n, static_cast<int>(k)).size())
            throw ShapeMismatch("complex levels are not exterior powers");
    return n;
}

}  // namespace

void DgProduct::set(int i, int bi, int j, int bj,
                    std::vector<Polynomial> value) {
    entries_[{i, bi, j, bj}] = std::move(value);
}

std::vector<Polynomial> DgProduct::apply(const ChainComplex& c, int i,
                                         const std::vector<Polynomial>& x,
                                         int j,
                                         const std::vector<Polynomial>& y) const {
    const PolyRing& ring = c.ring();
    if (i + j > static_cast<int>(c.length())) return {};
    auto out = zero_vec(ring, c.level(i + j).rank());
    for (size_t bi = 0; bi < x.size(); ++bi) {
        if (x[bi].is_zero()) continue;
        for (size_t bj = 0; bj < y.size(); ++bj) {
            if (y[bj].is_zero()) continue;
            auto it = entries_.find(
                {i, static_cast<int>(bi), j, static_cast<int>(bj)});
            if (it == entries_.end()) continue;
            out = vadd(std::move(out), vmul(x[bi] * y[bj], it->second));
        }
    }
    return out;
}

DgProduct wedge_product(const ChainComplex& koszul) {
    const int n = koszul_rank_of(koszul);
    const PolyRing& ring = koszul.ring();
    DgProduct prod;
    for (int i = 0; i <= n; ++i) {
        auto bi = subsets_of_size(n, i);
        for (int j = 0; i + j <= n; ++j) {
            auto bj = subsets_of_size(n, j);
            auto bij = subsets_of_size(n, i + j);
            for (size_t a = 0; a < bi.size(); ++a)
                for (size_t b = 0; b < bj.size(); ++b) {
                    if (bi[a] & bj[b]) continue;
                    int sgn = shuffle_sign(bi[a], bj[b]);
                    IndexSet u = bi[a] | bj[b];
                    auto v = zero_vec(ring, bij.size());
                    // tuple-lex order is not the numeric order; search.
                    size_t pos = 0;
                    while (bij[pos] != u) ++pos;
                    v[pos] = Polynomial::constant(ring, sgn);
                    prod.set(i, static_cast<int>(a), j, static_cast<int>(b),
                             std::move(v));
                }
        }
    }
    return prod;
}

bool check_dg_algebra(const ChainComplex& c, const DgProduct& product) {
    const PolyRing& ring = c.ring();
    const int m = static_cast<int>(c.length());
    if (c.level(0).rank() != 1)
        throw ShapeMismatch("DG-algebra check needs a rank-1 level 0");

    for (const auto& [key, v] : product.entries()) {
        auto [i, bi, j, bj] = key;
        if (i + j > m) {
            if (!vzero(v)) return false;
            continue;
        }
        if (v.size() != c.level(i + j).rank())
            throw ShapeMismatch("product entry lands in the wrong level");
    }

    auto basis_vec = [&](int i, int b) {
        auto v = zero_vec(ring, c.level(i).rank());
        v[b] = Polynomial::constant(ring, 1);
        return v;
    };
    auto diff = [&](int i, const std::vector<Polynomial>& x) {
        if (i == 0) return zero_vec(ring, 1);
        return c.differential(i).apply(x);
    };

    // Unitality.
    for (int j = 0; j <= m; ++j)
        for (size_t b = 0; b < c.level(j).rank(); ++b) {
            auto e = basis_vec(j, static_cast<int>(b));
            if (product.apply(c, 0, basis_vec(0, 0), j, e) != e) return false;
            if (product.apply(c, j, e, 0, basis_vec(0, 0)) != e) return false;
        }

    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            if (i + j > m + 1) continue;  // everything in sight is zero
            const int lvl = i + j - 1;    // where the Leibniz identity lives
            auto normalize = [&](std::vector<Polynomial> v) {
                if (v.empty() && lvl >= 0 && lvl <= m)
                    v = zero_vec(ring, c.level(lvl).rank());
                return v;
            };
            for (size_t a = 0; a < c.level(i).rank(); ++a)
                for (size_t b = 0; b < c.level(j).rank(); ++b) {
                    auto ea = basis_vec(i, static_cast<int>(a));
                    auto eb = basis_vec(j, static_cast<int>(b));
                    auto ab = product.apply(c, i, ea, j, eb);
                    // Graded commutativity and odd squares.
                    if (i + j <= m) {
                        auto ba = product.apply(c, j, eb, i, ea);
                        if (i % 2 == 1 && j % 2 == 1)
                            for (auto& p : ba) p = -p;
                        if (ab != ba) return false;
                        if (i == j && a == b && i % 2 == 1 && !vzero(ab))
                            return false;
                    }
                    if (lvl < 0 || lvl > m) continue;
                    // Leibniz: d(ab) = d(a)b + (-1)^i a d(b).
                    auto lhs = normalize(
                        (i + j <= m && i + j >= 1) ? diff(i + j, ab)
                                                   : std::vector<Polynomial>{});
                    auto rhs1 = normalize(
                        i >= 1 ? product.apply(c, i - 1, diff(i, ea), j, eb)
                               : std::vector<Polynomial>{});
                    auto rhs2 = normalize(
                        j >= 1 ? product.apply(c, i, ea, j - 1, diff(j, eb))
                               : std::vector<Polynomial>{});
                    if (i % 2 == 1)
                        for (auto& p : rhs2) p = -p;
                    if (lhs != vadd(std::move(rhs1), rhs2)) return false;
                }
        }
    return true;
}

std::vector<Polynomial> ProductTable::get(int i, int b, int g,
                                          const PolyRing& ring,
                                          size_t rank) const {
    auto it = entries.find({i, b, g});
    if (it == entries.end()) return zero_vec(ring, rank);
    return it->second;
}

bool check_dg_module(const ChainComplex& c, const DifferentialModule& d,
                     const ProductTable& p, bool unital, long max_eq_deg) {
    if (c.ring() != d.ring()) throw RingMismatch("DG-module ring mismatch");
    const PolyRing& ring = d.ring();
    const int a = d.degree();
    const int m = static_cast<int>(c.length());
    const size_t dn = d.rank();
    const bool graded = c.graded() && d.graded();

    auto gen_degree = [&](int i, int b) {
        return -(long(c.level(i).twists[b]) + long(i) * a);
    };

    for (const auto& [key, v] : p.entries) {
        auto [i, b, g] = key;
        if (i < 0 || i > m || b < 0 ||
            static_cast<size_t>(b) >= c.level(i).rank() || g < 0 ||
            static_cast<size_t>(g) >= dn)
            throw ShapeMismatch("product table key out of range");
        if (v.size() != dn)
            throw ShapeMismatch("product table value has wrong rank");
        if (graded) {
            long t = gen_degree(i, b) + d.module().generator_degree(g);
            for (size_t r = 0; r < dn; ++r) {
                if (v[r].is_zero()) continue;
                if (!v[r].is_homogeneous_of_degree(t + d.module().twists[r]))
                    throw NotHomogeneous(
                        "product table entry is not homogeneous of the "
                        "forced degree");
            }
        }
    }

    if (unital) {
        if (c.level(0).rank() != 1)
            throw ShapeMismatch("unital check needs a rank-1 level 0");
        for (size_t g = 0; g < dn; ++g) {
            auto v = p.get(0, 0, static_cast<int>(g), ring, dn);
            for (size_t r = 0; r < dn; ++r) {
                bool is_id = r == g;
                if (v[r] != (is_id ? Polynomial::constant(ring, 1)
                                   : Polynomial::zero(ring)))
                    return false;
            }
        }
    }

    for (int i = 0; i <= m; ++i)
        for (size_t b = 0; b < c.level(i).rank(); ++b)
            for (size_t g = 0; g < dn; ++g) {
                if (graded && max_eq_deg >= 0) {
                    long t = gen_degree(i, static_cast<int>(b)) +
                             d.module().generator_degree(g);
                    if (t + a > max_eq_deg) continue;
                }
                auto u = p.get(i, static_cast<int>(b), static_cast<int>(g),
                               ring, dn);
                auto lhs = d.matrix().apply(u);
                auto rhs = zero_vec(ring, dn);
                if (i >= 1) {
                    const Matrix& di = c.differential(i);
                    for (size_t b2 = 0; b2 < c.level(i - 1).rank(); ++b2) {
                        const Polynomial& e = di.at(b2, b);
                        if (e.is_zero()) continue;
                        rhs = vadd(std::move(rhs),
                                   vmul(e, p.get(i - 1, static_cast<int>(b2),
                                                 static_cast<int>(g), ring,
                                                 dn)));
                    }
                }
                for (size_t g2 = 0; g2 < dn; ++g2) {
                    const Polynomial& e = d.matrix().at(g2, g);
                    if (e.is_zero()) continue;
                    auto term = vmul(e, p.get(i, static_cast<int>(b),
                                              static_cast<int>(g2), ring, dn));
                    if (i % 2 == 1)
                        for (auto& q : term) q = -q;
                    rhs = vadd(std::move(rhs), term);
                }
                if (lhs != rhs) return false;
            }
    return true;
}

ProductTable transport_product(const Matrix& phi, const DifferentialModule& src,
                               const DifferentialModule& dst,
                               const ChainComplex& c,
                               const ProductTable& p_dst, bool unital) {
    if (!verify_isomorphism(phi, src, dst))
        throw PreconditionViolated("transport needs a verified isomorphism");
    if (!check_dg_module(c, dst, p_dst, unital))
        throw PreconditionViolated("transport source table is not an action");
    const PolyRing& ring = src.ring();
    const size_t dn = src.rank();
    Matrix phi_inv = phi.inverse();

    ProductTable out;
    for (int i = 0; i <= static_cast<int>(c.length()); ++i)
        for (size_t b = 0; b < c.level(i).rank(); ++b)
            for (size_t g = 0; g < dn; ++g) {
                // phi(g), acted on by the dst table, pulled back by phi^-1.
                auto acted = zero_vec(ring, dn);
                for (size_t r = 0; r < dn; ++r) {
                    const Polynomial& cg = phi.at(r, g);
                    if (cg.is_zero()) continue;
                    acted = vadd(std::move(acted),
                                 vmul(cg, p_dst.get(i, static_cast<int>(b),
                                                    static_cast<int>(r), ring,
                                                    dn)));
                }
                auto back = phi_inv.apply(acted);
                if (!vzero(back))
                    out.entries[{i, static_cast<int>(b),
                                 static_cast<int>(g)}] = std::move(back);
            }
    if (!check_dg_module(c, src, out, unital))
        throw Error("transported table failed verification");
    return out;
}

namespace {

struct UnknownBlock {
    long t;  // element degree of the image
    // Coordinate layout: per generator r, the monomials of degree t+tw_r.
    std::vector<std::pair<int, Monomial>> coords;
    std::map<std::pair<int, std::vector<uint32_t>>, int> index;
    int id0 = -1;  // first global unknown id
};

}  // namespace

DGSolveResult solve_dg_module(const ChainComplex& c,
                              const DifferentialModule& d, int max_deg,
                              bool unital, int jobs) {
    if (!d.graded() || !c.graded())
        throw UngradedInput("solve_dg_module needs graded input");
    if (c.ring() != d.ring()) throw RingMismatch("solver ring mismatch");
    const PolyRing& ring = d.ring();
    const uint64_t charac = ring.characteristic();
    const int a = d.degree();
    const int m = static_cast<int>(c.length());
    const size_t dn = d.rank();
    if (unital && c.level(0).rank() != 1)
        throw ShapeMismatch("unital solve needs a rank-1 level 0");

    auto gen_degree = [&](int i, int b) {
        return -(long(c.level(i).twists[b]) + long(i) * a);
    };

    // Unknown blocks, in deterministic order.
    std::map<std::tuple<int, int, int>, UnknownBlock> blocks;
    int next_id = 0;
    for (int i = 0; i <= m; ++i)
        for (size_t b = 0; b < c.level(i).rank(); ++b)
            for (size_t g = 0; g < dn; ++g) {
                long t = gen_degree(i, static_cast<int>(b)) +
                         d.module().generator_degree(g);
                if (t > max_deg) continue;
                UnknownBlock blk;
                blk.t = t;
                blk.id0 = next_id;
                for (size_t r = 0; r < dn; ++r) {
                    long cd = t + d.module().twists[r];
                    if (cd < 0) continue;
                    for (Monomial& mono :
                         monomials_of_weighted_degree(ring, cd)) {
                        blk.index[{static_cast<int>(r), mono.exps()}] =
                            static_cast<int>(blk.coords.size());
                        blk.coords.emplace_back(static_cast<int>(r),
                                                std::move(mono));
                    }
                }
                next_id += static_cast<int>(blk.coords.size());
                blocks.emplace(std::make_tuple(i, static_cast<int>(b),
                                               static_cast<int>(g)),
                               std::move(blk));
            }

    // Equations grouped by the internal degree they live in.
    using RowKey = std::pair<int, std::vector<uint32_t>>;
    struct Equation {
        std::unordered_map<int, Scalar> row;
        Scalar rhs;
    };
    std::map<long, std::vector<Equation>> by_degree;

    auto block_of = [&](int i, int b, int g) -> const UnknownBlock* {
        auto it = blocks.find({i, b, g});
        return it == blocks.end() ? nullptr : &it->second;
    };

    // Unitality: p(1 (x) g) = g, one equation per coordinate.
    if (unital) {
        for (size_t g = 0; g < dn; ++g) {
            const UnknownBlock* blk = block_of(0, 0, static_cast<int>(g));
            if (!blk) continue;
            long T = blk->t;
            bool target_seen = false;
            for (size_t k = 0; k < blk->coords.size(); ++k) {
                const auto& [r, mono] = blk->coords[k];
                bool is_target = static_cast<size_t>(r) == g && mono.is_one();
                target_seen |= is_target;
                Equation eq;
                eq.row.emplace(blk->id0 + static_cast<int>(k),
                               Scalar::one(charac));
                eq.rhs = is_target ? Scalar::one(charac) : Scalar::zero(charac);
                by_degree[T].push_back(std::move(eq));
            }
            if (!target_seen) {
                Equation eq;  // 0 = 1: the unit coordinate does not exist
                eq.rhs = Scalar::one(charac);
                by_degree[T].push_back(std::move(eq));
            }
        }
    }

    // Leibniz rows per pair (i, b, g); blocks are independent, so they can
    // be assembled in parallel and merged back in block order.
    std::vector<const std::pair<const std::tuple<int, int, int>,
                                UnknownBlock>*> block_list;
    for (const auto& kv : blocks) block_list.push_back(&kv);
    std::vector<std::vector<std::pair<long, Equation>>> assembled(
        block_list.size());

    auto assemble_block = [&](size_t idx) {
        const auto& [key, blk] = *block_list[idx];
        auto [i, b, g] = key;
        long T = blk.t + a;
        if (T > max_deg) return;
        std::map<RowKey, std::unordered_map<int, Scalar>> rows;
        auto accumulate = [&](const UnknownBlock* src, const Polynomial& coeff,
                              int sign) {
            if (!src || coeff.is_zero()) return;
            for (size_t k = 0; k < src->coords.size(); ++k) {
                const auto& [r, mono] = src->coords[k];
                for (const Term& term : coeff.terms()) {
                    Monomial target = mono * term.mono;
                    Scalar v = sign < 0 ? -term.coeff : term.coeff;
                    auto& row = rows[{r, target.exps()}];
                    auto [it, fresh] =
                        row.emplace(src->id0 + static_cast<int>(k), v);
                    if (!fresh) it->second += v;
                }
            }
        };
        // d^D(p(b,g)): unknown coordinates pushed through the differential.
        {
            const UnknownBlock* self = &blk;
            for (size_t k = 0; k < self->coords.size(); ++k) {
                const auto& [r, mono] = self->coords[k];
                for (size_t r2 = 0; r2 < dn; ++r2) {
                    const Polynomial& e = d.matrix().at(r2, r);
                    if (e.is_zero()) continue;
                    for (const Term& term : e.terms()) {
                        Monomial target = mono * term.mono;
                        auto& row = rows[{static_cast<int>(r2), target.exps()}];
                        auto [it, fresh] = row.emplace(
                            self->id0 + static_cast<int>(k), term.coeff);
                        if (!fresh) it->second += term.coeff;
                    }
                }
            }
        }
        // -p(d^F(b) (x) g)
        if (i >= 1) {
            const Matrix& di = c.differential(i);
            for (size_t b2 = 0; b2 < c.level(i - 1).rank(); ++b2)
                accumulate(block_of(i - 1, static_cast<int>(b2), g),
                           di.at(b2, b), -1);
        }
        // -(-1)^i p(b (x) d^D(g))
        for (size_t g2 = 0; g2 < dn; ++g2)
            accumulate(block_of(i, b, static_cast<int>(g2)),
                       d.matrix().at(g2, g), i % 2 == 0 ? -1 : +1);

        for (auto& [rk, row] : rows) {
            Equation eq;
            eq.row = std::move(row);
            eq.rhs = Scalar::zero(charac);
            assembled[idx].emplace_back(T, std::move(eq));
        }
    };
    if (jobs <= 1 || block_list.size() <= 1) {
        for (size_t idx = 0; idx < block_list.size(); ++idx)
            assemble_block(idx);
    } else {
        size_t nthreads = std::min<size_t>(jobs, block_list.size());
        std::vector<std::future<void>> fs;
        std::atomic<size_t> next{0};
        for (size_t k = 0; k < nthreads; ++k)
            fs.push_back(std::async(std::launch::async, [&] {
                for (size_t idx = next++; idx < block_list.size();
                     idx = next++)
                    assemble_block(idx);
            }));
        for (auto& f : fs) f.get();
    }
    for (auto& batch : assembled)
        for (auto& [T, eq] : batch) by_degree[T].push_back(std::move(eq));

    IncrementalSystem sys(charac);
    for (auto& [T, eqs] : by_degree)
        for (auto& eq : eqs)
            if (!sys.add_equation(std::move(eq.row), eq.rhs))
                return DgInfeasible{T};

    ProductTable table;
    for (const auto& [key, blk] : blocks) {
        auto [i, b, g] = key;
        auto v = zero_vec(ring, dn);
        bool nonzero = false;
        for (size_t k = 0; k < blk.coords.size(); ++k) {
            Scalar s = sys.value(blk.id0 + static_cast<int>(k));
            if (s.is_zero()) continue;
            const auto& [r, mono] = blk.coords[k];
            v[r] = v[r] + Polynomial::term(ring, s, mono);
            nonzero = true;
        }
        if (nonzero) table.entries[{i, b, g}] = std::move(v);
    }
    if (!check_dg_module(c, d, table, unital, max_deg))
        throw Error("solver table failed the truncated verification");
    return DgFeasible{std::move(table)};
}

ProductTable ex54_product_table(const DifferentialModule& d54) {
    const PolyRing& ring = d54.ring();
    if (d54.rank() != 4 || ring.arity() != 2)
        throw ShapeMismatch("ex5.4 table expects the rank-4 flag over k[x1,x2]");
    Polynomial x1 = Polynomial::variable(ring, 0);
    Polynomial x2 = Polynomial::variable(ring, 1);
    Polynomial zero = Polynomial::zero(ring);
    Polynomial one = Polynomial::constant(ring, 1);

    ProductTable t;
    for (int g = 0; g < 4; ++g) {
        auto v = zero_vec(ring, 4);
        v[g] = one;
        t.entries[{0, 0, g}] = std::move(v);  // 1 . d = d
    }
    t.entries[{1, 0, 0}] = {zero, one, Polynomial::zero(ring), zero};  // e1.1
    t.entries[{1, 1, 0}] = {zero, zero, one, zero};                    // e2.1
    t.entries[{2, 0, 0}] = {zero, -x1, -x2, one};      // e12.1
    t.entries[{1, 0, 2}] = {zero, -x1, -x2, one};      // e1.e2
    // e2.e1 = -(e1.e2); the Leibniz rule on e2 (x) e1 forces this row.
    t.entries[{1, 1, 1}] = {zero, x1, x2, -one};
    t.entries[{1, 0, 3}] = {zero, -(x1 * x2), -(x2 * x2), x2};   // e1.e12
    t.entries[{1, 1, 3}] = {zero, x1 * x1, x1 * x2, -x1};        // e2.e12
    return t;
}

ProductTable fold_wedge_table(const ChainComplex& koszul) {
    const int n = koszul_rank_of(koszul);
    const PolyRing& ring = koszul.ring();
    std::vector<std::vector<IndexSet>> bases;
    std::vector<size_t> offset(n + 1, 0);
    size_t total = 0;
    for (int k = 0; k <= n; ++k) {
        bases.push_back(subsets_of_size(n, k));
        offset[k] = total;
        total += bases[k].size();
    }
    ProductTable t;
    for (int i = 0; i <= n; ++i)
        for (size_t b = 0; b < bases[i].size(); ++b)
            for (int j = 0; j <= n; ++j)
                for (size_t gj = 0; gj < bases[j].size(); ++gj) {
                    IndexSet I = bases[i][b], J = bases[j][gj];
                    if (I & J) continue;
                    if (i + j > n) continue;
                    int sgn = shuffle_sign(I, J);
                    IndexSet u = I | J;
                    size_t pos = 0;
                    while (bases[i + j][pos] != u) ++pos;
                    auto v = zero_vec(ring, total);
                    v[offset[i + j] + pos] = Polynomial::constant(ring, sgn);
                    t.entries[{i, static_cast<int>(b),
                               static_cast<int>(offset[j] + gj)}] =
                        std::move(v);
                }
    return t;
}

}  // namespace dmflag
