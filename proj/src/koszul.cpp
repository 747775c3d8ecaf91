#include "dmflag/koszul.hpp"

#include <algorithm>

namespace dmflag {

namespace {

// Coordinates of an exterior element in the size-k tuple-lex basis.
std::vector<Polynomial> coords(const ExteriorElement& x,
                               const std::vector<IndexSet>& basis) {
    std::vector<Polynomial> out;
    out.reserve(basis.size());
    for (IndexSet I : basis) out.push_back(x.coefficient(I));
    return out;
}

}  // namespace

ChainComplex koszul_complex(const DualElement& psi, int n) {
    if (psi.weight() != 1)
        throw PreconditionViolated("koszul_complex needs a weight-1 dual");
    if (psi.n() != n) throw ShapeMismatch("koszul_complex rank mismatch");
    const PolyRing& ring = psi.ring();

    // Generator degree of e_i: the degree of psi(e_i) (1 for zero slots).
    std::vector<long> gen_deg(n, 1);
    bool graded = true;
    for (int i = 0; i < n; ++i) {
        Polynomial c = psi.coefficient(IndexSet(1) << i);
        if (c.is_zero()) continue;
        auto h = c.homogeneous_degree();
        if (!h)
            graded = false;
        else
            gen_deg[i] = *h;
    }

    std::vector<GradedFreeModule> modules;
    std::vector<Matrix> diffs;
    std::vector<std::vector<IndexSet>> bases;
    for (int k = 0; k <= n; ++k) {
        bases.push_back(subsets_of_size(n, k));
        GradedFreeModule m{ring, {}};
        for (IndexSet I : bases[k]) {
            long d = 0;
            for (int i = 0; i < n; ++i)
                if (I >> i & 1) d += gen_deg[i];
            m.twists.push_back(static_cast<int>(-d));
        }
        modules.push_back(std::move(m));
    }
    for (int k = 1; k <= n; ++k) {
        Matrix d(ring, bases[k - 1].size(), bases[k].size());
        for (size_t c = 0; c < bases[k].size(); ++c) {
            ExteriorElement img =
                contract(psi, ExteriorElement::basis(ring, n, bases[k][c]));
            auto col = coords(img, bases[k - 1]);
            for (size_t r = 0; r < col.size(); ++r)
                if (!col[r].is_zero()) d.set(r, c, std::move(col[r]));
        }
        diffs.push_back(std::move(d));
    }
    return ChainComplex(std::move(modules), std::move(diffs), graded);
}

KoszulData KoszulData::make(int n, std::vector<DualElement> duals) {
    KoszulData k;
    k.n = n;
    for (size_t w = 0; w < duals.size(); ++w) {
        if (duals[w].weight() != static_cast<int>(w) + 1)
            throw PreconditionViolated("dual weights must be 1,2,... in order");
        if (duals[w].n() != n) throw ShapeMismatch("dual over wrong rank");
    }
    k.duals = std::move(duals);
    return k;
}

FreeFlag koszul_dm(const KoszulData& data, int degree_a, bool graded) {
    if (data.duals.empty())
        throw PreconditionViolated("koszul_dm needs at least the dual slots");
    const PolyRing& ring = data.duals[0].ring();
    const int n = data.n;
    for (const auto& f : data.duals)
        if (f.ring() != ring) throw RingMismatch("duals over mixed rings");

    if (ring.characteristic() != 2) {
        for (size_t i = 2; i <= data.duals.size(); i += 2)
            for (size_t j = i; j <= data.duals.size(); j += 2) {
                const DualElement& fi = data.dual(static_cast<int>(i));
                const DualElement& fj = data.dual(static_cast<int>(j));
                if (fi.is_zero() || fj.is_zero()) continue;
                if (!dual_compose_is_zero(fi, fj))
                    throw PreconditionViolated(
                        "even duals f" + std::to_string(i) + ", f" +
                        std::to_string(j) + " do not compose to zero");
            }
    }

    // Graded mode: every present dual must have coefficients of one degree
    // delta_w, and the slope (delta_w - a)/w must be one integer for all w.
    std::vector<int> level_twist(n + 1, 0);
    if (graded) {
        std::optional<long> slope;
        for (size_t w = 1; w <= data.duals.size(); ++w) {
            const DualElement& f = data.dual(static_cast<int>(w));
            if (f.is_zero()) continue;
            std::optional<long> dw;
            for (const auto& [I, c] : f.coefficients()) {
                auto h = c.homogeneous_degree();
                if (!h || (dw && *dw != *h))
                    throw NotHomogeneous("dual f" + std::to_string(w) +
                                         " has mixed coefficient degrees");
                dw = *h;
            }
            long num = *dw - degree_a;
            if (num % static_cast<long>(w) != 0)
                throw NotHomogeneous("dual degrees incompatible with degree " +
                                     std::to_string(degree_a));
            long s = num / static_cast<long>(w);
            if (slope && *slope != s)
                throw NotHomogeneous("dual degrees are not on one progression");
            slope = s;
        }
        for (int i = 0; i <= n; ++i)
            level_twist[i] = static_cast<int>(-i * slope.value_or(0));
    }

    std::vector<std::vector<IndexSet>> bases;
    GradedFreeModule mod{ring, {}};
    std::vector<int> levels;
    std::vector<size_t> offset(n + 1, 0);
    for (int k = 0; k <= n; ++k) {
        bases.push_back(subsets_of_size(n, k));
        offset[k] = mod.twists.size();
        for (size_t b = 0; b < bases[k].size(); ++b) {
            mod.twists.push_back(level_twist[k]);
            levels.push_back(k);
        }
    }

    Matrix m(ring, mod.twists.size(), mod.twists.size());
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < i; ++j) {
            int w = i - j;
            if (w > static_cast<int>(data.duals.size())) continue;
            const DualElement& f = data.dual(w);
            if (f.is_zero()) continue;
            const bool flip = (i % 2 == 1) && (j % 2 == 1);  // (-1)^{ij}
            for (size_t c = 0; c < bases[i].size(); ++c) {
                ExteriorElement img =
                    contract(f, ExteriorElement::basis(ring, n, bases[i][c]));
                auto col = coords(img, bases[j]);
                for (size_t r = 0; r < col.size(); ++r) {
                    if (col[r].is_zero()) continue;
                    m.set(offset[j] + r, offset[i] + c,
                          flip ? -col[r] : col[r]);
                }
            }
        }
    // Square-zero is re-proved numerically here; with the precondition
    // satisfied it must never throw.
    return FreeFlag(make_dm(std::move(mod), std::move(m), degree_a, graded),
                    std::move(levels));
}

FreeFlag specialize_generic_koszul(
    const PolyRing& ring, int n,
    const std::map<IndexSet, Polynomial>& assignment, int degree_a) {
    std::vector<DualElement> duals;
    for (int w = 1; w <= n; ++w) {
        DualElement f(ring, n, w);
        for (IndexSet I : subsets_of_size(n, w)) {
            auto it = assignment.find(I);
            if (it == assignment.end())
                throw PreconditionViolated("assignment missing x_" +
                                           index_set_str(I));
            if (it->second.ring() != ring)
                throw RingMismatch("assigned value over wrong ring");
            f.add_term(I, it->second);
        }
        duals.push_back(std::move(f));
    }
    // The generic construction lives over Z[x_I]/(even relations); the
    // specialized values must satisfy those relations in every characteristic.
    for (int i = 2; i <= n; i += 2)
        for (int j = i; j <= n; j += 2) {
            const DualElement& fi = duals[i - 1];
            const DualElement& fj = duals[j - 1];
            for (int k = i + j; k <= n; ++k)
                for (IndexSet I : subsets_of_size(n, k)) {
                    ExteriorElement x = contract(
                        fi, contract(fj, ExteriorElement::basis(ring, n, I)));
                    if (x.is_zero()) continue;
                    throw RelationViolated(
                        "specialized duals violate f" + std::to_string(i) +
                            "*f" + std::to_string(j) + " = 0 on e" +
                            index_set_str(I),
                        i, j, x.coefficients().begin()->second.str());
                }
        }
    KoszulData data = KoszulData::make(n, std::move(duals));
    try {
        return koszul_dm(data, degree_a, true);
    } catch (const NotHomogeneous&) {
        return koszul_dm(data, degree_a, false);
    }
}

DifferentialModule small_rank_dm(int n, uint64_t characteristic) {
    if (n < 2) throw PreconditionViolated("small_rank_dm needs n >= 2");
    PolyRing ring = PolyRing::standard(2, characteristic);
    Polynomial x1 = Polynomial::variable(ring, 0);
    Polynomial x2 = Polynomial::variable(ring, 1);
    Matrix m(ring, 2, 2);
    m.set(0, 0, x1 * x2);
    m.set(0, 1, -(x2 * x2));
    m.set(1, 0, x1 * x1);
    m.set(1, 1, -(x1 * x2));
    DifferentialModule d =
        make_dm(GradedFreeModule{ring, {0, 0}}, std::move(m), 2, true);
    for (int k = 3; k <= n; ++k) {
        PolyRing big = PolyRing::standard(k, characteristic);
        d = mapping_cone(change_ring(d, big),
                         Polynomial::variable(big, k - 1));
    }
    return d;
}

namespace {

// 4x4 flag with first row (0, p1, p2, f) and last column (f, q1, q2, 0).
FreeFlag corner_family(const Polynomial& p1, const Polynomial& p2,
                       const Polynomial& q1, const Polynomial& q2,
                       const Polynomial& f, int degree_a,
                       std::vector<int> twists, bool graded) {
    const PolyRing& ring = p1.ring();
    Matrix m(ring, 4, 4);
    m.set(0, 1, p1);
    m.set(0, 2, p2);
    m.set(0, 3, f);
    m.set(1, 3, q1);
    m.set(2, 3, q2);
    return FreeFlag(make_dm(GradedFreeModule{ring, std::move(twists)},
                            std::move(m), degree_a, graded),
                    {0, 1, 1, 2});
}

}  // namespace

FreeFlag gallery_ex12(const Polynomial& f) {
    const PolyRing& ring = f.ring();
    if (ring.arity() != 2)
        throw PreconditionViolated("ex1.2 lives over a 2-variable ring");
    bool graded = f.is_zero() || f.is_homogeneous_of_degree(2);
    Polynomial x1 = Polynomial::variable(ring, 0);
    Polynomial x2 = Polynomial::variable(ring, 1);
    return corner_family(x1, x2, -x2, x1, f, 0, {0, -1, -1, -2}, graded);
}

namespace {

FreeFlag gallery_ex33(uint64_t charac) {
    PolyRing ring = PolyRing::standard(2, charac);
    Polynomial x1 = Polynomial::variable(ring, 0);
    Polynomial x2 = Polynomial::variable(ring, 1);
    // Anchored over the minimal free resolution of S/(x1^2, x1*x2), which
    // is not a Koszul complex; ungraded (the corner x1 has its own degree).
    return corner_family(x1 * x1, x1 * x2, -x2, x1, x1, 0, {0, 0, 0, 0},
                         false);
}

FreeFlag gallery_corner1(uint64_t charac) {
    PolyRing ring = PolyRing::standard(2, charac);
    Polynomial x1 = Polynomial::variable(ring, 0);
    Polynomial x2 = Polynomial::variable(ring, 1);
    return corner_family(x1, x2, -x2, x1, Polynomial::constant(ring, 1), 2,
                         {0, 1, 1, 2}, true);
}

FreeFlag gallery_ex54_flag(uint64_t charac) {
    PolyRing ring = PolyRing::standard(2, charac);
    Polynomial x1 = Polynomial::variable(ring, 0);
    Polynomial x2 = Polynomial::variable(ring, 1);
    return gallery_ex12(x1 * x1 + x2 * x2);
}

// Ring Q[x_I | I subset [n] nonempty] with variables named by the index
// tuples: x1, x2, ..., x12, x13, ..., x1234.
PolyRing subset_ring(int n, uint64_t charac) {
    std::vector<std::string> names;
    for (IndexSet I : nonempty_subsets(n)) {
        std::string s = "x";
        for (int i = 0; i < n; ++i)
            if (I >> i & 1) s += std::to_string(i + 1);
        names.push_back(std::move(s));
    }
    return PolyRing(std::move(names), charac);
}

FreeFlag gallery_ex41(uint64_t charac) {
    const int n = 4;
    PolyRing ring = subset_ring(n, charac);
    auto var = [&](IndexSet I) {
        std::string s = "x";
        for (int i = 0; i < n; ++i)
            if (I >> i & 1) s += std::to_string(i + 1);
        return Polynomial::variable(ring, ring.var_index(s));
    };
    std::vector<DualElement> duals;
    for (int w = 1; w <= n; ++w) {
        DualElement f(ring, n, w);
        for (IndexSet I : subsets_of_size(n, w)) {
            if (w == 2 && (I & 1)) continue;  // e_{1j} -> 0
            f.add_term(I, var(I));
        }
        duals.push_back(std::move(f));
    }
    return koszul_dm(KoszulData::make(n, std::move(duals)), 1, true);
}

FreeFlag gallery_ex46(uint64_t charac) {
    const int n = 4;
    PolyRing ring = PolyRing::standard(n, charac);
    auto x = [&](int i) { return Polynomial::variable(ring, i - 1); };

    DualElement f1(ring, n, 1);
    for (int i = 1; i <= n; ++i)
        f1.add_term(IndexSet(1) << (i - 1), x(i) * x(i) * x(i));
    DualElement f2(ring, n, 2);
    f2.add_term(parse_index_set("{1,2}", n), x(1) * x(2));
    f2.add_term(parse_index_set("{3,4}", n), x(2) * x(2));
    DualElement g3(ring, n, 3);
    g3.add_term(parse_index_set("{1,3,4}", n),
                Polynomial::constant(ring, 2) * x(1));

    // Not of the K(f) shape: A_{3,0} = g3 but A_{4,1} = 0.
    std::vector<std::vector<IndexSet>> bases;
    for (int k = 0; k <= n; ++k) bases.push_back(subsets_of_size(n, k));
    GradedFreeModule mod{ring, {}};
    std::vector<int> levels;
    std::vector<size_t> offset(n + 1, 0);
    for (int k = 0; k <= n; ++k) {
        offset[k] = mod.twists.size();
        for (size_t b = 0; b < bases[k].size(); ++b) {
            mod.twists.push_back(k);
            levels.push_back(k);
        }
    }
    Matrix m(ring, mod.rank(), mod.rank());
    auto paste_block = [&](int i, int j, const DualElement& f, int sign) {
        for (size_t c = 0; c < bases[i].size(); ++c) {
            ExteriorElement img =
                contract(f, ExteriorElement::basis(ring, n, bases[i][c]));
            for (size_t r = 0; r < bases[j].size(); ++r) {
                Polynomial e = img.coefficient(bases[j][r]);
                if (!e.is_zero())
                    m.set(offset[j] + r, offset[i] + c, sign < 0 ? -e : e);
            }
        }
    };
    for (int i = 1; i <= 4; ++i) paste_block(i, i - 1, f1, +1);
    paste_block(2, 0, f2, +1);
    paste_block(3, 1, f2, -1);
    paste_block(4, 2, f2, +1);
    paste_block(3, 0, g3, +1);
    return FreeFlag(make_dm(std::move(mod), std::move(m), 4, true),
                    std::move(levels));
}

}  // namespace

GalleryItem gallery(const std::string& id, uint64_t characteristic,
                    const std::optional<std::string>& f_text) {
    if (id == "ex1.2") {
        PolyRing ring = PolyRing::standard(2, characteristic);
        Polynomial f = f_text ? Polynomial::parse(ring, *f_text)
                              : Polynomial::zero(ring);
        return gallery_ex12(f);
    }
    if (id == "ex3.3") return gallery_ex33(characteristic);
    if (id == "ex4.1") return gallery_ex41(characteristic);
    if (id == "ex4.6") return gallery_ex46(characteristic);
    if (id == "ex5.4") return gallery_ex54_flag(characteristic);
    if (id == "cor3.x-corner1") return gallery_corner1(characteristic);
    if (id.rfind("smallrank-n", 0) == 0) {
        int n = std::stoi(id.substr(11));
        return small_rank_dm(n, characteristic);
    }
    throw UnknownGallery("unknown gallery id: " + id);
}

std::vector<std::string> gallery_ids() {
    return {"ex1.2", "ex3.3",          "ex4.1",        "ex4.6",
            "ex5.4", "cor3.x-corner1", "smallrank-n2", "smallrank-n3",
            "smallrank-n4", "smallrank-n5"};
}

const DifferentialModule& gallery_dm(const GalleryItem& item) {
    if (std::holds_alternative<DifferentialModule>(item))
        return std::get<DifferentialModule>(item);
    return std::get<FreeFlag>(item).dm();
}

}  // namespace dmflag
