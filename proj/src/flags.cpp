#include "dmflag/flags.hpp"

#include <algorithm>

#include "dmflag/exterior.hpp"
#include "dmflag/koszul.hpp"

namespace dmflag {

namespace {

std::vector<std::vector<size_t>> level_gens(const FreeFlag& flag) {
    std::vector<std::vector<size_t>> out(flag.max_level() + 1);
    for (size_t g = 0; g < flag.levels().size(); ++g) {
        int l = flag.levels()[g];
        if (l < 0) throw PreconditionViolated("negative flag level");
        out[l].push_back(g);
    }
    return out;
}

}  // namespace

bool anchored_check(const FreeFlag& flag, const ChainComplex& anchor) {
    if (flag.dm().ring() != anchor.ring())
        throw RingMismatch("flag and anchor over different rings");
    auto gens = level_gens(flag);
    if (gens.size() != anchor.length() + 1)
        throw ShapeMismatch("flag levels vs anchor length");
    for (size_t i = 0; i < gens.size(); ++i)
        if (gens[i].size() != anchor.level(i).rank())
            throw ShapeMismatch("rank mismatch at level " + std::to_string(i));
    for (size_t i = 1; i < gens.size(); ++i)
        if (flag.block(static_cast<int>(i), static_cast<int>(i) - 1) !=
            anchor.differential(i))
            return false;
    return true;
}

bool is_koszul_shaped(const ChainComplex& anchor) {
    if (anchor.level(0).rank() != 1) return false;
    const size_t n = anchor.level(1).rank();
    if (anchor.length() != n) return false;
    const PolyRing& ring = anchor.ring();
    DualElement psi(ring, static_cast<int>(n), 1);
    for (size_t c = 0; c < n; ++c)
        psi.add_term(IndexSet(1) << c, anchor.differential(1).at(0, c));
    ChainComplex expect = koszul_complex(psi, static_cast<int>(n));
    for (size_t i = 0; i <= n; ++i)
        if (anchor.level(i).rank() != expect.level(i).rank()) return false;
    for (size_t i = 1; i <= n; ++i)
        if (anchor.differential(i) != expect.differential(i)) return false;
    return true;
}

namespace {

// Elementary conjugation tracker: applies column operations
// col_target -= q * col_source together with the inverse row operation,
// accumulating the composite change of basis.
struct Conjugator {
    Matrix m;    // current differential
    Matrix phi;  // accumulated basis change: m = phi m0 phi^-1

    explicit Conjugator(const DifferentialModule& d)
        : m(d.matrix()), phi(Matrix::identity(d.ring(), d.rank())) {}

    // E = I - q E_{src,target}: col_target -= q col_src on the right,
    // row_src += q row_target on the left; phi <- E^-1 phi.
    void column_op(size_t target, size_t src, const Polynomial& q) {
        if (q.is_zero()) return;
        for (size_t r = 0; r < m.rows(); ++r)
            m.set(r, target, m.at(r, target) - q * m.at(r, src));
        for (size_t c = 0; c < m.cols(); ++c)
            m.set(src, c, m.at(src, c) + q * m.at(target, c));
        for (size_t c = 0; c < phi.cols(); ++c)
            phi.set(src, c, phi.at(src, c) + q * phi.at(target, c));
    }
};

// Homogeneous components of a column vector over `mod`, keyed by element
// degree (coefficient degree minus the generator twist).
std::map<long, std::vector<Polynomial>> split_by_degree(
    const GradedFreeModule& mod, const std::vector<Polynomial>& v) {
    std::map<long, std::vector<Polynomial>> out;
    for (size_t r = 0; r < v.size(); ++r) {
        for (const Term& t : v[r].terms()) {
            long deg = t.mono.weighted_degree(mod.ring) - mod.twists[r];
            auto [it, fresh] = out.emplace(
                deg, std::vector<Polynomial>(v.size(),
                                             Polynomial::zero(mod.ring)));
            it->second[r] =
                it->second[r] + Polynomial::term(mod.ring, t.coeff, t.mono);
        }
    }
    return out;
}

// Solves d_{level+1} q = v exactly, degree by degree; nullopt if no lift.
std::optional<std::vector<Polynomial>> lift_through(
    const ChainComplex& anchor, size_t level,
    const std::vector<Polynomial>& v) {
    const GradedFreeModule& dst = anchor.level(level);
    const GradedFreeModule& src = anchor.level(level + 1);
    const Matrix& d = anchor.differential(level + 1);
    if (!anchor.graded())
        throw UngradedInput("lifts need a graded anchor complex");
    std::vector<Polynomial> q(src.rank(), Polynomial::zero(src.ring));
    for (auto& [deg, comp] : split_by_degree(dst, v)) {
        SliceBasis sb = slice_basis(src, deg);
        SliceBasis db = slice_basis(dst, deg);
        if (sb.elems.empty()) return std::nullopt;
        SparseMat slice = degree_slice(d, src, dst, deg, 0, sb, db);
        std::vector<Scalar> rhs(db.elems.size(),
                                Scalar::zero(src.ring.characteristic()));
        for (size_t r = 0; r < comp.size(); ++r)
            for (const Term& t : comp[r].terms()) {
                auto it = db.index.find({r, t.mono.exps()});
                if (it == db.index.end()) return std::nullopt;
                rhs[static_cast<size_t>(it->second)] = t.coeff;
            }
        auto sol = slice.solve(rhs);
        if (!sol) return std::nullopt;
        for (size_t k = 0; k < sb.elems.size(); ++k) {
            if ((*sol)[k].is_zero()) continue;
            auto& [g, mono] = sb.elems[k];
            q[g] = q[g] + Polynomial::term(src.ring, (*sol)[k], mono);
        }
    }
    return q;
}

}  // namespace

CancelResult cancel_diagonals(const FreeFlag& flag, const ChainComplex& anchor) {
    if (!anchored_check(flag, anchor))
        throw PreconditionViolated("flag is not anchored on this complex");
    auto gens = level_gens(flag);
    const int m = flag.max_level();
    if (anchor.level(0).rank() != 1)
        throw PreconditionViolated(
            "cancellation needs a rank-1 anchor in level 0");
    const size_t g0 = gens[0][0];

    std::vector<Polynomial> d1_entries;
    for (size_t c = 0; c < anchor.level(1).rank(); ++c)
        d1_entries.push_back(anchor.differential(1).at(0, c));

    Conjugator conj(flag.dm());
    for (int diag = 2; diag <= m; ++diag) {
        for (int i = diag; i <= m; ++i) {
            const int j = i - diag;
            if (j == 0) {
                // Clear A_{i,0} with membership witnesses against d_1.
                for (size_t col : gens[i]) {
                    Polynomial p = conj.m.at(g0, col);
                    if (p.is_zero()) continue;
                    MembershipResult res = ideal_membership(p, d1_entries);
                    if (!is_member(res))
                        throw MembershipFailure(
                            "entry of A_{" + std::to_string(i) +
                                ",0} is not in (d_1): " + p.str(),
                            i, p.str());
                    const auto& w = std::get<MembershipWitness>(res);
                    for (size_t c = 0; c < gens[1].size(); ++c)
                        conj.column_op(col, gens[1][c], w.cofactors[c]);
                    if (!conj.m.at(g0, col).is_zero())
                        throw Error("column operations failed to clear A_{i,0}");
                }
            } else {
                // The relation sum A_{k,j-1} A_{i,k} = 0 now forces
                // d_j A_{i,j} = 0, so each column lifts through d_{j+1}.
                for (size_t col : gens[i]) {
                    std::vector<Polynomial> v;
                    v.reserve(gens[j].size());
                    bool zero = true;
                    for (size_t r : gens[j]) {
                        v.push_back(conj.m.at(r, col));
                        if (!v.back().is_zero()) zero = false;
                    }
                    if (zero) continue;
                    auto dv = anchor.differential(j).apply(v);
                    for (const auto& p : dv)
                        if (!p.is_zero())
                            throw Error("A_{i,j} column is not a d_j cycle");
                    auto q = lift_through(anchor, j, v);
                    if (!q)
                        throw ExactnessFailure(
                            "no lift of A_{" + std::to_string(i) + "," +
                                std::to_string(j) + "} through d_" +
                                std::to_string(j + 1),
                            j);
                    for (size_t c = 0; c < gens[j + 1].size(); ++c)
                        conj.column_op(col, gens[j + 1][c], (*q)[c]);
                    for (size_t r : gens[j])
                        if (!conj.m.at(r, col).is_zero())
                            throw Error("lift failed to clear A_{i,j}");
                }
            }
        }
    }

    DifferentialModule out =
        make_dm(flag.dm().module(), conj.m, flag.dm().degree(),
                flag.dm().graded());
    FreeFlag out_flag(std::move(out), flag.levels());
    for (int i = 2; i <= m; ++i)
        for (int j = 0; j <= i - 2; ++j)
            if (!out_flag.block(i, j).is_zero())
                throw Error("cancellation left a nonzero upper block");
    if (!verify_isomorphism(conj.phi, flag.dm(), out_flag.dm()))
        throw Error("cancellation basis change failed verification");
    return CancelResult{std::move(out_flag), std::move(conj.phi)};
}

FoldDecision fold_decision_ci(const FreeFlag& flag,
                              const ChainComplex& anchor) {
    if (!anchored_check(flag, anchor))
        throw PreconditionViolated("flag is not anchored on this complex");
    if (!is_koszul_shaped(anchor))
        throw PreconditionViolated(
            "fold_decision_ci needs a Koszul-complex anchor (complete "
            "intersection homology)");
    auto gens = level_gens(flag);
    const size_t g0 = gens[0][0];

    std::vector<Polynomial> d1_entries;
    for (size_t c = 0; c < anchor.level(1).rank(); ++c)
        d1_entries.push_back(anchor.differential(1).at(0, c));
    GroebnerBasis gb(d1_entries);

    for (int i = 2; i <= flag.max_level(); ++i)
        for (size_t col : gens[i]) {
            const Polynomial& p = flag.dm().matrix().at(g0, col);
            if (p.is_zero()) continue;
            MembershipResult res = ideal_membership(p, gb);
            if (!is_member(res))
                return NotIso{i, p, std::get<NotMember>(res).normal_form};
        }

    CancelResult cancelled = cancel_diagonals(flag, anchor);
    FreeFlag folded = fold(anchor, flag.dm().degree());
    if (!(cancelled.flag.dm().matrix() == folded.dm().matrix()))
        throw Error("cancelled flag does not equal the fold differential");
    if (!verify_isomorphism(cancelled.change_of_basis, flag.dm(),
                            folded.dm()))
        throw Error("fold decision witness failed verification");
    return IsoToFold{std::move(cancelled.change_of_basis)};
}

DegreeVerdict degree_analysis(const FreeFlag& flag, int degree_a) {
    const PolyRing& ring = flag.dm().ring();
    if (flag.dm().degree() != degree_a)
        throw PreconditionViolated("flag degree does not match degree_a");
    if (!flag.dm().graded())
        throw UngradedInput("degree_analysis needs a graded flag");
    const int n = static_cast<int>(ring.arity());
    DualElement psi(ring, n, 1);
    for (int i = 0; i < n; ++i)
        psi.add_term(IndexSet(1) << i, Polynomial::variable(ring, i));
    ChainComplex koszul = koszul_complex(psi, n);
    if (!anchored_check(flag, koszul))
        throw PreconditionViolated(
            "degree_analysis needs a flag anchored on Koszul(x1..xn)");
    // Twists at level i must be the Koszul twists shifted by i*a.
    auto gens = level_gens(flag);
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t k = 0; k < gens[i].size(); ++k)
            if (flag.dm().module().twists[gens[i][k]] !=
                koszul.level(i).twists[k] + static_cast<int>(i) * degree_a)
                throw PreconditionViolated(
                    "twists are not i*a shifts of the Koszul twists");

    if (degree_a == 2) return DegreeVerdict::Indeterminate;

    // Every A_{i,0} entry has nonzero degree, hence lies in m; verify.
    std::vector<Polynomial> vars;
    for (int i = 0; i < n; ++i) vars.push_back(Polynomial::variable(ring, i));
    const size_t g0 = gens[0][0];
    for (int i = 2; i <= flag.max_level(); ++i)
        for (size_t col : gens[i]) {
            const Polynomial& p = flag.dm().matrix().at(g0, col);
            if (p.is_zero()) continue;
            if (!is_member(ideal_membership(p, vars)))
                throw PreconditionViolated(
                    "degree analysis found an entry outside the maximal "
                    "ideal; the twist precondition cannot have held");
        }
    return DegreeVerdict::ForcedFold;
}

}  // namespace dmflag
