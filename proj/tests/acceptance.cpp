// Acceptance suite: one criterion per run_criterion call, one PASS/FAIL
// line each, nonzero exit if anything fails. Runtime budgets are part of
// the criteria and are enforced.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "dmflag/dgmod.hpp"
#include "dmflag/flags.hpp"
#include "dmflag/groebner.hpp"
#include "dmflag/koszul.hpp"
#include "test_util.hpp"

using namespace dmflag;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void run_criterion(int number, const std::string& name, double budget_seconds,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto t0 = Clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (ok && budget_seconds > 0 && secs > budget_seconds) {
        ok = false;
        detail = "over time budget";
    }
    if (!ok) ++failures;
    std::printf("criterion %d: %s  (%.2fs%s) %s%s\n", number,
                ok ? "PASS" : "FAIL", secs,
                budget_seconds > 0
                    ? (" / " + std::to_string((int)budget_seconds) + "s").c_str()
                    : "",
                name.c_str(), detail.empty() ? "" : ("  [" + detail + "]").c_str());
}

Polynomial P(const PolyRing& r, const std::string& s) {
    return Polynomial::parse(r, s);
}

ChainComplex koszul_vars(const PolyRing& r) {
    DualElement psi(r, static_cast<int>(r.arity()), 1);
    for (size_t i = 0; i < r.arity(); ++i)
        psi.add_term(IndexSet(1) << i, Polynomial::variable(r, i));
    return koszul_complex(psi, static_cast<int>(r.arity()));
}

DualElement random_dual(std::mt19937& rng, const PolyRing& ring, int n, int w) {
    DualElement f(ring, n, w);
    for (IndexSet I : subsets_of_size(n, w))
        f.add_term(I, testutil::random_poly(rng, ring, 2, 1, 2));
    return f;
}

DualElement random_one_form(std::mt19937& rng, const PolyRing& ring, int n) {
    DualElement f(ring, n, 1);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int i = 0; i < n; ++i)
        f.add_term(IndexSet(1) << i, Polynomial::constant(ring, coeff(rng)));
    return f;
}

// The ten graded gallery instances used for the cone-invariance criterion.
std::vector<DifferentialModule> cone_gallery() {
    PolyRing r = PolyRing::standard(2);
    std::vector<DifferentialModule> out;
    for (const char* f : {"0", "x1^2", "x1*x2", "x2^2", "x1^2 + x2^2",
                          "x1*x2 + x2^2"})
        out.push_back(gallery_ex12(P(r, f)).dm());
    out.push_back(std::get<FreeFlag>(gallery("ex5.4")).dm());
    out.push_back(std::get<FreeFlag>(gallery("cor3.x-corner1")).dm());
    out.push_back(std::get<DifferentialModule>(gallery("smallrank-n2")));
    out.push_back(std::get<DifferentialModule>(gallery("smallrank-n3")));
    return out;
}

bool criterion1(std::string& detail) {
    std::mt19937 rng(101);
    PolyRing r2 = PolyRing::standard(2);
    int validated = 0;
    for (int i = 0; i < 10; ++i) {
        Polynomial f = testutil::random_homogeneous(rng, r2, 2);
        gallery_ex12(f).dm().validate();
        ++validated;
    }
    for (const std::string& id :
         {std::string("ex3.3"), std::string("ex4.1"), std::string("ex4.6"),
          std::string("ex5.4"), std::string("cor3.x-corner1"),
          std::string("smallrank-n2"), std::string("smallrank-n3"),
          std::string("smallrank-n4"), std::string("smallrank-n5")}) {
        gallery_dm(gallery(id)).validate();
        ++validated;
    }
    detail = std::to_string(validated) + " objects validated";
    return validated == 19;
}

bool criterion2(std::string& detail) {
    std::mt19937 rng(202);
    int built = 0;
    // 120 instances over F_2 with arbitrary duals, n <= 5.
    PolyRing r2 = PolyRing::standard(3, 2);
    for (int it = 0; it < 120; ++it) {
        int n = 2 + static_cast<int>(rng() % 4);
        std::vector<DualElement> duals;
        for (int w = 1; w <= n; ++w) duals.push_back(random_dual(rng, r2, n, w));
        koszul_dm(KoszulData::make(n, std::move(duals)), 0, false);
        ++built;
    }
    // 80 instances over Q with even duals built to pair to zero.
    PolyRing r0 = PolyRing::standard(3);
    for (int it = 0; it < 80; ++it) {
        int n = 4 + static_cast<int>(rng() % 2);
        DualElement a = random_one_form(rng, r0, n);
        DualElement b = random_one_form(rng, r0, n);
        std::vector<DualElement> duals;
        duals.push_back(random_dual(rng, r0, n, 1));
        duals.push_back(dual_wedge(a, b));
        duals.push_back(random_dual(rng, r0, n, 3));
        duals.push_back(dual_wedge(dual_wedge(a, b),
                                   dual_wedge(random_one_form(rng, r0, n),
                                              random_one_form(rng, r0, n))));
        koszul_dm(KoszulData::make(n, std::move(duals)), 0, false);
        ++built;
    }
    detail = std::to_string(built) + " instances, no NotSquareZero";
    return built == 200;
}

bool criterion3(std::string& detail) {
    for (int n = 2; n <= 4; ++n) {
        PolyRing r = PolyRing::standard(n);
        FreeFlag f = fold(koszul_vars(r));
        HilbertVector h = homology_hilbert(f.dm(), 10, 4);
        std::vector<long> want(11, 0);
        want[0] = 1;
        if (h.dims != want) {
            detail = "fold Koszul n=" + std::to_string(n);
            return false;
        }
    }
    for (int n = 2; n <= 4; ++n) {
        DifferentialModule d = small_rank_dm(n);
        if (d.rank() != (size_t(1) << (n - 1)) ||
            d.rank() >= (size_t(1) << n)) {
            detail = "smallrank rank n=" + std::to_string(n);
            return false;
        }
        HilbertVector h = homology_hilbert(d, 10, 4);
        std::vector<long> want(11, 0);
        want[1] = 1;
        if (h.dims != want) {
            detail = "smallrank homology n=" + std::to_string(n);
            return false;
        }
    }
    detail = "H(fold K) = k deg 0; H(smallrank) = k deg 1, rank 2^(n-1)";
    return true;
}

bool criterion4(std::string& detail) {
    int checked = 0;
    for (const DifferentialModule& d : cone_gallery()) {
        std::vector<std::string> names = d.ring().var_names();
        names.push_back("zfresh");
        PolyRing wide(names, d.ring().characteristic());
        DifferentialModule cone =
            mapping_cone(change_ring(d, wide),
                         Polynomial::variable(wide, names.size() - 1));
        if (!(homology_hilbert(cone, 10, 4) == homology_hilbert(d, 10, 4))) {
            detail = "cone changed homology for module " +
                     std::to_string(checked);
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " modules, Hilbert vectors equal";
    return checked == 10;
}

// Shared by criteria 5 and 6.
struct DecisionRun {
    Polynomial f;
    FoldDecision decision;
};
std::vector<DecisionRun> decision_runs() {
    std::mt19937 rng(505);
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    std::vector<DecisionRun> out;
    for (int it = 0; it < 50; ++it) {
        Polynomial f = testutil::random_homogeneous(rng, r, 2);
        out.push_back({f, fold_decision_ci(gallery_ex12(f), k)});
    }
    return out;
}

bool criterion5(std::string& detail) {
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    FreeFlag target = fold(k);
    std::vector<Polynomial> xs{P(r, "x1"), P(r, "x2")};
    int agreements = 0;
    for (const DecisionRun& run : decision_runs()) {
        bool member = is_member(ideal_membership(run.f, xs));
        bool iso = std::holds_alternative<IsoToFold>(run.decision);
        if (iso != member) {
            detail = "verdict disagrees with membership for f = " +
                     run.f.str();
            return false;
        }
        if (iso) {
            const Matrix& phi = std::get<IsoToFold>(run.decision).change_of_basis;
            if (!verify_isomorphism(phi, gallery_ex12(run.f).dm(),
                                    target.dm())) {
                detail = "witness failed verification for f = " + run.f.str();
                return false;
            }
        }
        ++agreements;
    }
    detail = std::to_string(agreements) + " of 50 verdicts match membership";
    return agreements == 50;
}

bool criterion6(std::string& detail) {
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    int cleared = 0;
    for (const DecisionRun& run : decision_runs()) {
        if (!std::holds_alternative<IsoToFold>(run.decision)) continue;
        FreeFlag d = gallery_ex12(run.f);
        CancelResult cr = cancel_diagonals(d, k);
        for (int i = 2; i <= 2; ++i)
            for (int j = 0; j <= i - 2; ++j)
                if (!cr.flag.block(i, j).is_zero()) {
                    detail = "nonzero upper block after cancellation";
                    return false;
                }
        const Matrix& phi = cr.change_of_basis;
        for (size_t a = 0; a < phi.rows(); ++a) {
            if (!(phi.at(a, a) == P(r, "1"))) {
                detail = "basis change is not unitriangular";
                return false;
            }
            for (size_t b = 0; b < phi.cols(); ++b)
                if (d.levels()[a] > d.levels()[b] && !phi.at(a, b).is_zero()) {
                    detail = "basis change raises flag levels";
                    return false;
                }
        }
        ++cleared;
    }
    detail = std::to_string(cleared) + " IsoToFold cases cancelled";
    return cleared > 0;
}

bool criterion7(std::string& detail) {
    PolyRing r = PolyRing::standard(2);
    auto flag_for = [&](int a) {
        Polynomial f = Polynomial::zero(r);
        if (a == 0) f = P(r, "x1^2 + x1*x2");
        if (a == 1) f = P(r, "x1 - 2*x2");
        if (a == -1) f = P(r, "x1^2*x2");
        Matrix m(r, 4, 4);
        m.set(0, 1, P(r, "x1"));
        m.set(0, 2, P(r, "x2"));
        m.set(0, 3, f);
        m.set(1, 3, P(r, "-x2"));
        m.set(2, 3, P(r, "x1"));
        return FreeFlag(
            make_dm(GradedFreeModule{r, {0, a - 1, a - 1, 2 * a - 2}},
                    std::move(m), a, true),
            {0, 1, 1, 2});
    };
    for (int a : {-1, 0, 1, 3})
        if (degree_analysis(flag_for(a), a) != DegreeVerdict::ForcedFold) {
            detail = "expected ForcedFold at a = " + std::to_string(a);
            return false;
        }
    GalleryItem corner = gallery("cor3.x-corner1");
    if (degree_analysis(std::get<FreeFlag>(corner), 2) !=
        DegreeVerdict::Indeterminate) {
        detail = "expected Indeterminate at a = 2";
        return false;
    }
    detail = "ForcedFold for a in {-1,0,1,3}, Indeterminate for a = 2";
    return true;
}

bool criterion8(std::string& detail) {
    for (int n = 2; n <= 4; ++n) {
        PolyRing r = PolyRing::standard(n);
        ChainComplex k = koszul_vars(r);
        if (!check_dg_algebra(k, wedge_product(k))) {
            detail = "wedge DG-algebra check failed at n = " + std::to_string(n);
            return false;
        }
    }
    GalleryItem e54 = gallery("ex5.4");
    const FreeFlag& d54 = std::get<FreeFlag>(e54);
    ChainComplex k2 = koszul_vars(d54.dm().ring());
    if (!check_dg_module(k2, d54.dm(), ex54_product_table(d54.dm()))) {
        detail = "ex5.4 printed table rejected";
        return false;
    }
    FreeFlag f2 = fold(k2);
    DGSolveResult good = solve_dg_module(k2, f2.dm(), 8);
    if (!std::holds_alternative<DgFeasible>(good)) {
        detail = "fold(Koszul(x1,x2)) reported infeasible";
        return false;
    }
    GalleryItem corner = gallery("cor3.x-corner1");
    const FreeFlag& dc = std::get<FreeFlag>(corner);
    ChainComplex kc = koszul_vars(dc.dm().ring());
    DGSolveResult bad = solve_dg_module(kc, dc.dm(), 8);
    if (!std::holds_alternative<DgInfeasible>(bad)) {
        detail = "corner-1 flag reported feasible";
        return false;
    }
    long t = std::get<DgInfeasible>(bad).first_obstructed_degree;
    if (t > 4) {
        detail = "obstruction degree " + std::to_string(t) + " > 4";
        return false;
    }
    detail = "wedge algebras ok; ex5.4 ok; fold feasible; corner-1 "
             "infeasible at degree " + std::to_string(t);
    return true;
}

bool criterion9(std::string& detail) {
    GalleryItem item = gallery("ex3.3");
    const FreeFlag& d = std::get<FreeFlag>(item);
    const PolyRing& r = d.dm().ring();

    Matrix foldm(r, 4, 4);
    foldm.set(0, 1, P(r, "x1^2"));
    foldm.set(0, 2, P(r, "x1*x2"));
    foldm.set(1, 3, P(r, "-x2"));
    foldm.set(2, 3, P(r, "x1"));
    DifferentialModule foldd =
        make_dm(GradedFreeModule{r, {0, 0, 0, 0}}, foldm, 0, false);

    Matrix phi = Matrix::identity(r, 4);
    phi.set(0, 2, P(r, "-1"));  // the printed row operation on the corner
    if (!verify_isomorphism(phi, d.dm(), foldd)) {
        detail = "the example map is not an isomorphism";
        return false;
    }
    auto res = ideal_membership(P(r, "x1"), {P(r, "x1^2"), P(r, "x1*x2")});
    if (is_member(res)) {
        detail = "x1 unexpectedly in (x1^2, x1*x2)";
        return false;
    }
    detail = "isomorphism verified while x1 is not in (x1^2, x1*x2)";
    return true;
}

}  // namespace

int main() {
    run_criterion(1, "square-zero across the whole gallery", 5, criterion1);
    run_criterion(2, "200 randomized Koszul differential modules", 30,
                  criterion2);
    run_criterion(3, "homology certificates for folds and smallrank", 60,
                  criterion3);
    run_criterion(4, "cone invariance of Hilbert vectors", 60, criterion4);
    run_criterion(5, "fold decision matches ideal membership", 30, criterion5);
    run_criterion(6, "constructive cancellation output shape", 0, criterion6);
    run_criterion(7, "degree analysis across differential degrees", 0,
                  criterion7);
    run_criterion(8, "DG-algebra and DG-module suite", 60, criterion8);
    run_criterion(9, "the corner that cancels by rows only", 0, criterion9);

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", failures);
    return 1;
}
