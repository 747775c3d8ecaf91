#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dmflag/flags.hpp"
#include "dmflag/koszul.hpp"
#include "test_util.hpp"

using namespace dmflag;

namespace {

Polynomial P(const PolyRing& r, const std::string& s) {
    return Polynomial::parse(r, s);
}

DualElement psi_of(const std::vector<Polynomial>& entries) {
    const PolyRing& r = entries[0].ring();
    DualElement psi(r, static_cast<int>(entries.size()), 1);
    for (size_t i = 0; i < entries.size(); ++i)
        psi.add_term(IndexSet(1) << i, entries[i]);
    return psi;
}

ChainComplex koszul_on(const std::vector<Polynomial>& entries) {
    return koszul_complex(psi_of(entries), static_cast<int>(entries.size()));
}

ChainComplex koszul_vars(const PolyRing& r) {
    std::vector<Polynomial> xs;
    for (size_t i = 0; i < r.arity(); ++i)
        xs.push_back(Polynomial::variable(r, i));
    return koszul_on(xs);
}

// D_f over k[x1,x2] as a degree-a flag: twists (0, a-1, a-1, 2a-2).
FreeFlag corner_flag(const PolyRing& r, const Polynomial& f, int a,
                     bool graded) {
    Matrix m(r, 4, 4);
    m.set(0, 1, P(r, "x1"));
    m.set(0, 2, P(r, "x2"));
    m.set(0, 3, f);
    m.set(1, 3, P(r, "-x2"));
    m.set(2, 3, P(r, "x1"));
    return FreeFlag(
        make_dm(GradedFreeModule{r, {0, a - 1, a - 1, 2 * a - 2}},
                std::move(m), a, graded),
        {0, 1, 1, 2});
}

}  // namespace

TEST_CASE("anchored_check") {
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    FreeFlag f = fold(k);
    CHECK(anchored_check(f, k));

    FreeFlag ex12 = gallery_ex12(P(r, "x1^2"));
    CHECK(anchored_check(ex12, k));
    FreeFlag ex12b = gallery_ex12(P(r, "x1*x2 + 7*x2^2"));
    CHECK(anchored_check(ex12b, k));

    // Zeroing A_{2,1} breaks the anchoring.
    Matrix m = f.dm().matrix();
    m.set(1, 3, P(r, "0"));
    m.set(2, 3, P(r, "0"));
    FreeFlag broken(make_dm(f.dm().module(), m, 0, false), f.levels());
    CHECK(!anchored_check(broken, k));

    // Rank mismatch is an error, not `false`.
    PolyRing r3 = PolyRing::standard(3);
    CHECK_THROWS_AS(anchored_check(f, koszul_vars(r3)), RingMismatch);
}

TEST_CASE("is_koszul_shaped") {
    PolyRing r = PolyRing::standard(2);
    CHECK(is_koszul_shaped(koszul_vars(r)));
    CHECK(is_koszul_shaped(koszul_on({P(r, "x1^2"), P(r, "x2^3")})));

    // The minimal resolution of S/(x1^2, x1*x2) is not Koszul-shaped.
    std::vector<GradedFreeModule> mods{GradedFreeModule{r, {0}},
                                       GradedFreeModule{r, {-2, -2}},
                                       GradedFreeModule{r, {-3}}};
    std::vector<Matrix> diffs{
        Matrix::from_rows(r, {{P(r, "x1^2"), P(r, "x1*x2")}}),
        Matrix::from_rows(r, {{P(r, "-x2")}, {P(r, "x1")}})};
    ChainComplex res(std::move(mods), std::move(diffs), true);
    CHECK(!is_koszul_shaped(res));
}

TEST_CASE("fold_decision: f = x1^2 folds with a verified witness") {
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    FreeFlag d = gallery_ex12(P(r, "x1^2"));
    FoldDecision res = fold_decision_ci(d, k);
    REQUIRE(std::holds_alternative<IsoToFold>(res));
    const Matrix& phi = std::get<IsoToFold>(res).change_of_basis;
    FreeFlag target = fold(k);
    CHECK(verify_isomorphism(phi, d.dm(), target.dm()));
    // The single witness x1^2 = x1 * x1 gives phi = I + x1 E_{e1,e12}.
    Matrix want = Matrix::identity(r, 4);
    want.set(1, 3, P(r, "x1"));
    CHECK(phi == want);
    // Round-trip: conjugation carries the flag differential to the fold.
    CHECK(target.dm().matrix() * phi == phi * d.dm().matrix());
}

TEST_CASE("fold_decision: the corner-1 flag is not isomorphic to the fold") {
    GalleryItem corner = gallery("cor3.x-corner1");
    const FreeFlag& d = std::get<FreeFlag>(corner);
    ChainComplex k = koszul_vars(d.dm().ring());
    FoldDecision res = fold_decision_ci(d, k);
    REQUIRE(std::holds_alternative<NotIso>(res));
    const NotIso& n = std::get<NotIso>(res);
    CHECK(n.level == 2);
    CHECK(n.entry == P(d.dm().ring(), "1"));
    CHECK(n.normal_form == P(d.dm().ring(), "1"));
}

TEST_CASE("fold_decision on a fold returns the identity") {
    PolyRing r = PolyRing::standard(3);
    ChainComplex k = koszul_vars(r);
    FreeFlag f = fold(k);
    FoldDecision res = fold_decision_ci(f, k);
    REQUIRE(std::holds_alternative<IsoToFold>(res));
    CHECK(std::get<IsoToFold>(res).change_of_basis ==
          Matrix::identity(r, 8));
}

TEST_CASE("fold_decision rejects non-Koszul anchors") {
    GalleryItem item = gallery("ex3.3");
    const FreeFlag& d = std::get<FreeFlag>(item);
    const PolyRing& r = d.dm().ring();
    std::vector<GradedFreeModule> mods{GradedFreeModule{r, {0}},
                                       GradedFreeModule{r, {0, 0}},
                                       GradedFreeModule{r, {0}}};
    std::vector<Matrix> diffs{
        Matrix::from_rows(r, {{P(r, "x1^2"), P(r, "x1*x2")}}),
        Matrix::from_rows(r, {{P(r, "-x2")}, {P(r, "x1")}})};
    ChainComplex res(std::move(mods), std::move(diffs), false);
    REQUIRE(anchored_check(d, res));
    CHECK_THROWS_AS(fold_decision_ci(d, res), PreconditionViolated);
}

TEST_CASE("decision soundness on 50 random degree-2 f") {
    std::mt19937 rng(424242);
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    FreeFlag target = fold(k);
    std::vector<Polynomial> xs{P(r, "x1"), P(r, "x2")};
    for (int it = 0; it < 50; ++it) {
        Polynomial f = testutil::random_homogeneous(rng, r, 2);
        FreeFlag d = gallery_ex12(f);
        FoldDecision res = fold_decision_ci(d, k);
        bool member = is_member(ideal_membership(f, xs));
        CHECK(std::holds_alternative<IsoToFold>(res) == member);
        if (member) {
            const Matrix& phi = std::get<IsoToFold>(res).change_of_basis;
            CHECK(verify_isomorphism(phi, d.dm(), target.dm()));
        }
    }
}

TEST_CASE("decision soundness on inhomogeneous f with units") {
    PolyRing r = PolyRing::standard(2);
    ChainComplex k = koszul_vars(r);
    for (const char* s : {"1", "1 + x1^2", "x1 + 5"}) {
        FreeFlag d = gallery_ex12(P(r, s));
        FoldDecision res = fold_decision_ci(d, k);
        REQUIRE(std::holds_alternative<NotIso>(res));
        CHECK(!std::get<NotIso>(res).normal_form.is_zero());
    }
    // f = x1 + x2^2 is inhomogeneous but still in (x1, x2).
    FreeFlag d = gallery_ex12(P(r, "x1 + x2^2"));
    CHECK(std::holds_alternative<IsoToFold>(fold_decision_ci(d, k)));
}

TEST_CASE("cancel_diagonals clears a conjugated Koszul fold on cubes") {
    std::mt19937 rng(777);
    PolyRing r = PolyRing::standard(4);
    std::vector<Polynomial> cubes{P(r, "x1^3"), P(r, "x2^3"), P(r, "x3^3"),
                                  P(r, "x4^3")};
    ChainComplex k = koszul_on(cubes);
    FreeFlag f = fold(k);
    const auto& twists = f.dm().module().twists;

    for (int trial = 0; trial < 3; ++trial) {
        // Random graded unitriangular U supported on blocks with i - j >= 2.
        Matrix u = Matrix::identity(r, 16);
        for (size_t row = 0; row < 16; ++row)
            for (size_t col = 0; col < 16; ++col) {
                if (f.levels()[col] - f.levels()[row] < 2) continue;
                if (rng() % 3 != 0) continue;
                long deg = twists[row] - twists[col];
                Polynomial e = testutil::random_homogeneous(rng, r, deg, 1);
                u.set(row, col, e);
            }
        Matrix conj = u * f.dm().matrix() * u.inverse();
        FreeFlag d(make_dm(f.dm().module(), conj, 0, true), f.levels());

        FoldDecision res = fold_decision_ci(d, k);
        REQUIRE(std::holds_alternative<IsoToFold>(res));
        CancelResult cr = cancel_diagonals(d, k);
        for (int i = 2; i <= 4; ++i)
            for (int j = 0; j <= i - 2; ++j)
                CHECK(cr.flag.block(i, j).is_zero());
        CHECK(cr.flag.dm().matrix() == f.dm().matrix());
        // Unitriangular witness.
        for (size_t g = 0; g < 16; ++g)
            CHECK(cr.change_of_basis.at(g, g) == P(r, "1"));
        CHECK(verify_isomorphism(cr.change_of_basis, d.dm(), cr.flag.dm()));
    }
}

TEST_CASE("cancel_diagonals is the identity on folds") {
    PolyRing r = PolyRing::standard(3);
    ChainComplex k = koszul_vars(r);
    FreeFlag f = fold(k);
    CancelResult cr = cancel_diagonals(f, k);
    CHECK(cr.change_of_basis == Matrix::identity(r, 8));
    CHECK(cr.flag.dm().matrix() == f.dm().matrix());
}

TEST_CASE("cancel_diagonals reports membership failures") {
    GalleryItem corner = gallery("cor3.x-corner1");
    const FreeFlag& d = std::get<FreeFlag>(corner);
    ChainComplex k = koszul_vars(d.dm().ring());
    CHECK_THROWS_AS(cancel_diagonals(d, k), MembershipFailure);
}

TEST_CASE("degree_analysis across degrees") {
    PolyRing r = PolyRing::standard(2);
    auto flag_for = [&](int a) {
        Polynomial f = Polynomial::zero(r);
        if (a == 0) f = P(r, "x1^2 - 3*x1*x2");
        if (a == 1) f = P(r, "x1 + x2");
        if (a == -1) f = P(r, "x1^3");
        // a = 3: degree 2 - a < 0, so the corner must vanish.
        return corner_flag(r, f, a, true);
    };
    CHECK(degree_analysis(flag_for(-1), -1) == DegreeVerdict::ForcedFold);
    CHECK(degree_analysis(flag_for(0), 0) == DegreeVerdict::ForcedFold);
    CHECK(degree_analysis(flag_for(1), 1) == DegreeVerdict::ForcedFold);
    CHECK(degree_analysis(flag_for(3), 3) == DegreeVerdict::ForcedFold);

    GalleryItem corner = gallery("cor3.x-corner1");
    CHECK(degree_analysis(std::get<FreeFlag>(corner), 2) ==
          DegreeVerdict::Indeterminate);
}

TEST_CASE("degree_analysis validates its preconditions") {
    PolyRing r = PolyRing::standard(2);
    FreeFlag f = corner_flag(r, P(r, "x1^2"), 0, true);
    CHECK_THROWS_AS(degree_analysis(f, 2), PreconditionViolated);
    FreeFlag u = gallery_ex12(P(r, "1"));
    CHECK_THROWS_AS(degree_analysis(u, 0), UngradedInput);
    // Wrong twists for the claimed degree.
    Matrix m(r, 4, 4);
    m.set(0, 1, P(r, "x1"));
    m.set(0, 2, P(r, "x2"));
    m.set(1, 3, P(r, "-x2"));
    m.set(2, 3, P(r, "x1"));
    FreeFlag wrong(
        make_dm(GradedFreeModule{r, {5, 4, 4, 3}}, std::move(m), 0, true),
        {0, 1, 1, 2});
    CHECK_THROWS_AS(degree_analysis(wrong, 0), PreconditionViolated);
}
